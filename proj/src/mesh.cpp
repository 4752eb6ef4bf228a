#include "singfde/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace singfde {

namespace {

constexpr double kEvalSlack = 1e-12;

} // namespace

GradedMesh GradedMesh::graded(Eigen::Index segment_count, double gamma)
{
    if (segment_count < 2)
        throw std::invalid_argument("GradedMesh: need at least 2 segments");
    if (gamma < 1.0)
        throw std::invalid_argument("GradedMesh: grading exponent must be >= 1");

    Eigen::VectorXd nodes(segment_count + 1);
    for (Eigen::Index j = 0; j <= segment_count; ++j)
        nodes[j] = std::pow(static_cast<double>(j) / static_cast<double>(segment_count), gamma);
    nodes[0] = 0.0;
    nodes[segment_count] = 1.0;
    return GradedMesh(std::move(nodes), gamma);
}

GradedMesh GradedMesh::with_nodes(Eigen::VectorXd nodes)
{
    if (nodes.size() < 2)
        throw std::invalid_argument("GradedMesh: need at least 2 nodes");
    if (nodes[0] != 0.0)
        throw std::invalid_argument("GradedMesh: first node must be 0");
    for (Eigen::Index j = 1; j < nodes.size(); ++j)
        if (!(nodes[j] > nodes[j - 1]))
            throw std::invalid_argument("GradedMesh: nodes must increase strictly");
    return GradedMesh(std::move(nodes), 0.0);
}

Eigen::Index GradedMesh::locate(double t) const
{
    const double* begin = nodes_.data();
    const double* end = begin + nodes_.size();
    const double* it = std::upper_bound(begin, end, t);
    Eigen::Index j = static_cast<Eigen::Index>(it - begin) - 1;
    if (j < 0)
        j = 0;
    if (j > nodes_.size() - 2)
        j = nodes_.size() - 2;
    return j;
}

GradedMesh GradedMesh::scaled(double scale) const
{
    if (!(scale > 0.0))
        throw std::invalid_argument("GradedMesh: scale must be positive");
    Eigen::VectorXd nodes = scale * nodes_;
    nodes[0] = 0.0;
    return GradedMesh(std::move(nodes), grading_);
}

GradedMesh GradedMesh::merge(const GradedMesh& a, const GradedMesh& b)
{
    std::vector<double> all(a.nodes().data(), a.nodes().data() + a.node_count());
    all.insert(all.end(), b.nodes().data(), b.nodes().data() + b.node_count());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    Eigen::VectorXd nodes = Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
    return GradedMesh::with_nodes(std::move(nodes));
}

GridFunction::GridFunction(GradedMesh mesh, Eigen::VectorXd values)
    : mesh_(std::move(mesh)), values_(std::move(values))
{
    if (values_.size() != mesh_.node_count())
        throw std::invalid_argument("GridFunction: value count must match node count");
}

GridFunction GridFunction::constant(GradedMesh mesh, double c)
{
    Eigen::VectorXd v = Eigen::VectorXd::Constant(mesh.node_count(), c);
    return GridFunction(std::move(mesh), std::move(v));
}

GridFunction GridFunction::sample(GradedMesh mesh, const std::function<double(double)>& fn)
{
    Eigen::VectorXd v(mesh.node_count());
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        v[j] = fn(mesh.node(j));
    return GridFunction(std::move(mesh), std::move(v));
}

double GridFunction::operator()(double t) const
{
    const double lo = mesh_.node(0);
    const double hi = mesh_.right_endpoint();
    if (t < lo || t > hi) {
        if (t >= lo - kEvalSlack && t <= hi + kEvalSlack)
            t = std::clamp(t, lo, hi);
        else
            throw std::domain_error("GridFunction: evaluation outside the mesh interval");
    }
    Eigen::Index j = mesh_.locate(t);
    double t0 = mesh_.node(j);
    double t1 = mesh_.node(j + 1);
    double w = (t - t0) / (t1 - t0);
    return values_[j] + w * (values_[j + 1] - values_[j]);
}

double integrate(const GridFunction& f)
{
    const auto& m = f.mesh();
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.segment_count(); ++j)
        s += 0.5 * (m.node(j + 1) - m.node(j)) * (f.value(j) + f.value(j + 1));
    return s;
}

double integrate(const GridFunction& f, double a, double b)
{
    if (a > b)
        throw std::invalid_argument("integrate: a > b");
    const auto& m = f.mesh();
    a = std::max(a, m.node(0));
    b = std::min(b, m.right_endpoint());
    if (a >= b)
        return 0.0;
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.segment_count(); ++j) {
        double lo = std::max(a, m.node(j));
        double hi = std::min(b, m.node(j + 1));
        if (lo >= hi)
            continue;
        s += 0.5 * (hi - lo) * (f(lo) + f(hi));
    }
    return s;
}

double integrate_abs(const GridFunction& f)
{
    const auto& m = f.mesh();
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.segment_count(); ++j) {
        double t0 = m.node(j), t1 = m.node(j + 1);
        double v0 = f.value(j), v1 = f.value(j + 1);
        double h = t1 - t0;
        if (v0 * v1 >= 0.0) {
            s += 0.5 * h * (std::abs(v0) + std::abs(v1));
        } else {
            // Linear root splits the segment into two sign-definite triangles.
            double w = v0 / (v0 - v1);
            s += 0.5 * h * (w * std::abs(v0) + (1.0 - w) * std::abs(v1));
        }
    }
    return s;
}

double integrate_product(const GridFunction& f, const GridFunction& g)
{
    if (!(f.mesh() == g.mesh()))
        throw std::invalid_argument("integrate_product: mesh mismatch");
    const auto& m = f.mesh();
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.segment_count(); ++j) {
        double h = m.node(j + 1) - m.node(j);
        double fm = 0.5 * (f.value(j) + f.value(j + 1));
        double gm = 0.5 * (g.value(j) + g.value(j + 1));
        s += h / 6.0 * (f.value(j) * g.value(j) + 4.0 * fm * gm + f.value(j + 1) * g.value(j + 1));
    }
    return s;
}

double sup_abs(const GridFunction& f)
{
    return f.values().cwiseAbs().maxCoeff();
}

GridFunction operator+(const GridFunction& f, const GridFunction& g)
{
    if (!(f.mesh() == g.mesh()))
        throw std::invalid_argument("GridFunction: mesh mismatch");
    return f.with_values(f.values() + g.values());
}

GridFunction operator-(const GridFunction& f, const GridFunction& g)
{
    if (!(f.mesh() == g.mesh()))
        throw std::invalid_argument("GridFunction: mesh mismatch");
    return f.with_values(f.values() - g.values());
}

GridFunction operator*(double c, const GridFunction& f)
{
    return f.with_values(c * f.values());
}

} // namespace singfde
