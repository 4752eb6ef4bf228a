#include "singfde/operators.hpp"

#include "singfde/detail/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace singfde {

namespace {

// Breakpoints of K(t,.) * x(.) within [lo, hi]: union of both node sets.
std::vector<double> merged_breakpoints(const GradedMesh& a, const GradedMesh& b, double lo, double hi)
{
    std::vector<double> pts;
    pts.push_back(lo);
    pts.push_back(hi);
    for (Eigen::Index j = 0; j < a.node_count(); ++j)
        if (a.node(j) > lo && a.node(j) < hi)
            pts.push_back(a.node(j));
    for (Eigen::Index j = 0; j < b.node_count(); ++j)
        if (b.node(j) > lo && b.node(j) < hi)
            pts.push_back(b.node(j));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double simpson(double a, double b, double fa, double fm, double fb)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double clip(double v, OperatorPart part)
{
    return part == OperatorPart::plus ? std::max(v, 0.0) : std::max(-v, 0.0);
}

// int over [a, b] of clip(K) * x where K and x are linear on [a, b].
double clipped_piece_integral(double a, double b, double ka, double kb, double xa, double xb,
                              OperatorPart part)
{
    auto kat = [&](double t) { return ka + (kb - ka) * (t - a) / (b - a); };
    auto xat = [&](double t) { return xa + (xb - xa) * (t - a) / (b - a); };
    double root = b;
    bool split = false;
    if ((ka < 0.0) != (kb < 0.0) && ka != kb) {
        root = a + (0.0 - ka) / (kb - ka) * (b - a);
        split = root > a && root < b;
    }
    auto piece = [&](double lo, double hi) {
        double klo = clip(kat(lo), part), khi = clip(kat(hi), part);
        if (klo == 0.0 && khi == 0.0)
            return 0.0;
        double mid = 0.5 * (lo + hi);
        return simpson(lo, hi, klo * xat(lo), clip(kat(mid), part) * xat(mid), khi * xat(hi));
    };
    if (!split)
        return piece(a, b);
    return piece(a, root) + piece(root, b);
}

// Exact integral of a bilinear patch.
double patch_mean_integral(double c00, double c01, double c10, double c11, double area)
{
    return 0.25 * (c00 + c01 + c10 + c11) * area;
}

// Integral of |bilinear| over a patch, by recursive subdivision until the
// corners are sign-definite.  Leaf patches use a 4x4 Gauss estimate.
double abs_patch_integral(double c00, double c01, double c10, double c11, double area, int depth)
{
    const bool nonneg = c00 >= 0.0 && c01 >= 0.0 && c10 >= 0.0 && c11 >= 0.0;
    const bool nonpos = c00 <= 0.0 && c01 <= 0.0 && c10 <= 0.0 && c11 <= 0.0;
    if (nonneg || nonpos)
        return std::abs(patch_mean_integral(c00, c01, c10, c11, area));
    if (depth >= 12) {
        const auto& rule = detail::gauss8();
        double s = 0.0;
        for (int i = 0; i < 8; ++i) {
            double u = 0.5 * (1.0 + rule.nodes[i]);
            for (int j = 0; j < 8; ++j) {
                double v = 0.5 * (1.0 + rule.nodes[j]);
                double k = c00 * (1 - u) * (1 - v) + c01 * (1 - u) * v + c10 * u * (1 - v) + c11 * u * v;
                s += 0.25 * rule.weights[i] * rule.weights[j] * std::abs(k);
            }
        }
        return s * area;
    }
    auto mid = [](double a, double b) { return 0.5 * (a + b); };
    double e0 = mid(c00, c01), e1 = mid(c10, c11); // midpoints along v for u = 0, 1
    double f0 = mid(c00, c10), f1 = mid(c01, c11); // midpoints along u for v = 0, 1
    double cc = mid(e0, e1);
    double q = 0.25 * area;
    return abs_patch_integral(c00, f0, e0, cc, q, depth + 1)
         + abs_patch_integral(f0, c10, cc, e1, q, depth + 1)
         + abs_patch_integral(e0, cc, c01, f1, q, depth + 1)
         + abs_patch_integral(cc, e1, f1, c11, q, depth + 1);
}

} // namespace

double PointTerm::deviation_at(double t) const
{
    if (std::holds_alternative<double>(deviation))
        return std::get<double>(deviation);
    return std::get<GridFunction>(deviation)(t);
}

KernelTerm::KernelTerm(GradedMesh mesh, Eigen::MatrixXd values)
    : mesh_(std::move(mesh)), values_(std::move(values))
{
    if (values_.rows() != mesh_.node_count() || values_.cols() != mesh_.node_count())
        throw std::invalid_argument("KernelTerm: value matrix must be node_count x node_count");
}

double KernelTerm::operator()(double t, double s) const
{
    Eigen::Index i = mesh_.locate(t);
    Eigen::Index j = mesh_.locate(s);
    double u = (t - mesh_.node(i)) / (mesh_.node(i + 1) - mesh_.node(i));
    double v = (s - mesh_.node(j)) / (mesh_.node(j + 1) - mesh_.node(j));
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    return values_(i, j) * (1 - u) * (1 - v) + values_(i, j + 1) * (1 - u) * v
         + values_(i + 1, j) * u * (1 - v) + values_(i + 1, j + 1) * u * v;
}

RegularOperator RegularOperator::single_point(GridFunction q, std::variant<double, GridFunction> h)
{
    std::vector<PointTerm> pts;
    pts.push_back(PointTerm{std::move(q), std::move(h)});
    return RegularOperator(std::move(pts), {});
}

GridFunction apply(const RegularOperator& T, const GridFunction& x)
{
    const auto& mesh = x.mesh();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.node_count());
    for (const auto& term : T.point_terms()) {
        for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            out[i] += term.coefficient(t) * x(term.deviation_at(t));
        }
    }
    for (const auto& term : T.kernel_terms()) {
        auto pts = merged_breakpoints(term.mesh(), mesh, 0.0, term.mesh().right_endpoint());
        for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            double sum = 0.0;
            for (size_t j = 0; j + 1 < pts.size(); ++j) {
                double a = pts[j], b = pts[j + 1], m = 0.5 * (a + b);
                sum += simpson(a, b, term(t, a) * x(a), term(t, m) * x(m), term(t, b) * x(b));
            }
            out[i] += sum;
        }
    }
    return x.with_values(std::move(out));
}

GridFunction apply_part(const RegularOperator& T, const GridFunction& x, OperatorPart part)
{
    const auto& mesh = x.mesh();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.node_count());
    for (const auto& term : T.point_terms()) {
        for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            out[i] += clip(term.coefficient(t), part) * x(term.deviation_at(t));
        }
    }
    for (const auto& term : T.kernel_terms()) {
        auto pts = merged_breakpoints(term.mesh(), mesh, 0.0, term.mesh().right_endpoint());
        for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            double sum = 0.0;
            for (size_t j = 0; j + 1 < pts.size(); ++j) {
                double a = pts[j], b = pts[j + 1];
                sum += clipped_piece_integral(a, b, term(t, a), term(t, b), x(a), x(b), part);
            }
            out[i] += sum;
        }
    }
    return x.with_values(std::move(out));
}

GridFunction absolute_unit_image(const RegularOperator& T, const GradedMesh& mesh)
{
    GridFunction unit = GridFunction::constant(mesh, 1.0);
    GridFunction plus = apply_part(T, unit, OperatorPart::plus);
    GridFunction minus = apply_part(T, unit, OperatorPart::minus);
    return plus + minus;
}

std::pair<double, double> part_norms(const RegularOperator& T)
{
    double norm_plus = 0.0, norm_minus = 0.0;
    for (const auto& term : T.point_terms()) {
        double total = integrate(term.coefficient);
        double absolute = integrate_abs(term.coefficient);
        norm_plus += 0.5 * (absolute + total);
        norm_minus += 0.5 * (absolute - total);
    }
    for (const auto& term : T.kernel_terms()) {
        const auto& m = term.mesh();
        const auto& K = term.values();
        double total = 0.0, absolute = 0.0;
        for (Eigen::Index i = 0; i < m.segment_count(); ++i) {
            double dt = m.node(i + 1) - m.node(i);
            for (Eigen::Index j = 0; j < m.segment_count(); ++j) {
                double ds = m.node(j + 1) - m.node(j);
                double area = dt * ds;
                total += patch_mean_integral(K(i, j), K(i, j + 1), K(i + 1, j), K(i + 1, j + 1), area);
                absolute += abs_patch_integral(K(i, j), K(i, j + 1), K(i + 1, j), K(i + 1, j + 1), area, 0);
            }
        }
        norm_plus += 0.5 * (absolute + total);
        norm_minus += 0.5 * (absolute - total);
    }
    return {norm_plus, norm_minus};
}

VolterraClass classify_volterra(const RegularOperator& T)
{
    bool volterra = true, anti = true;
    for (const auto& term : T.point_terms()) {
        if (std::holds_alternative<double>(term.deviation)) {
            double theta = std::get<double>(term.deviation);
            volterra = volterra && theta == 0.0;
            anti = anti && theta == 1.0;
        } else {
            const auto& h = std::get<GridFunction>(term.deviation);
            for (Eigen::Index j = 0; j < h.node_count(); ++j) {
                double t = h.mesh().node(j);
                volterra = volterra && h.value(j) <= t;
                anti = anti && h.value(j) >= t;
            }
        }
    }
    for (const auto& term : T.kernel_terms()) {
        const auto& m = term.mesh();
        const auto& K = term.values();
        for (Eigen::Index i = 0; i < m.node_count(); ++i)
            for (Eigen::Index j = 0; j < m.node_count(); ++j) {
                if (m.node(j) > m.node(i))
                    volterra = volterra && K(i, j) == 0.0;
                if (m.node(j) < m.node(i))
                    anti = anti && K(i, j) == 0.0;
            }
    }
    if (volterra && anti)
        return VolterraClass::both;
    if (volterra)
        return VolterraClass::volterra;
    if (anti)
        return VolterraClass::anti_volterra;
    return VolterraClass::neither;
}

bool is_volterra(const RegularOperator& T)
{
    auto c = classify_volterra(T);
    return c == VolterraClass::volterra || c == VolterraClass::both;
}

bool is_anti_volterra(const RegularOperator& T)
{
    auto c = classify_volterra(T);
    return c == VolterraClass::anti_volterra || c == VolterraClass::both;
}

namespace {

// (|T| nu)(t) with nu folded into the point/kernel evaluations.
double absolute_weighted_image(const RegularOperator& T, const WeightFunction& nu, double t)
{
    double total = 0.0;
    for (const auto& term : T.point_terms())
        total += std::abs(term.coefficient(t)) * nu(term.deviation_at(t));
    for (const auto& term : T.kernel_terms()) {
        const auto& m = term.mesh();
        for (Eigen::Index j = 0; j < m.segment_count(); ++j) {
            double a = m.node(j), b = m.node(j + 1);
            double ka = term(t, a), kb = term(t, b);
            double root = (ka < 0.0) != (kb < 0.0) && ka != kb ? a + (0.0 - ka) / (kb - ka) * (b - a)
                                                               : b;
            auto piece = [&](double lo, double hi) {
                return detail::gauss_segment(
                    [&](double s) { return std::abs(term(t, s)) * nu(s); }, lo, hi);
            };
            if (root > a && root < b)
                total += piece(a, root) + piece(root, b);
            else
                total += piece(a, b);
        }
    }
    return total;
}

GradedMesh gain_mesh(const RegularOperator& T)
{
    GradedMesh mesh = GradedMesh::graded(256, 2.0);
    return mesh_refined_by_operator(mesh, T);
}

} // namespace

ExtendedReal weighted_gain(const RegularOperator& T, const WeightFunction& nu)
{
    if (T.empty())
        return ExtendedReal::finite(0.0);
    GradedMesh mesh = gain_mesh(T);

    double node_max = 0.0;
    for (Eigen::Index j = 1; j < mesh.node_count(); ++j) {
        double t = mesh.node(j);
        node_max = std::max(node_max, absolute_weighted_image(T, nu, t) / nu(t));
    }

    // Dyadic ladder below the first node: a ratio that keeps climbing as
    // t -> 0 marks an essentially unbounded gain.
    double t = mesh.node(1);
    double first = absolute_weighted_image(T, nu, t) / nu(t);
    double prev = first;
    double ladder_max = first;
    bool increasing = true;
    for (int i = 0; i < 12; ++i) {
        t *= 0.5;
        double r = absolute_weighted_image(T, nu, t) / nu(t);
        increasing = increasing && r >= prev * 0.999;
        ladder_max = std::max(ladder_max, r);
        prev = r;
    }
    if (increasing && prev > 4.0 * std::max(first, 1e-12))
        return ExtendedReal::infinity();
    return ExtendedReal::finite(std::max(node_max, ladder_max));
}

double weighted_gain_near_zero(const RegularOperator& T, const WeightFunction& nu, double beta)
{
    if (T.empty())
        return 0.0;
    GradedMesh mesh = gain_mesh(T);
    double best = 0.0;
    for (Eigen::Index j = 1; j < mesh.node_count(); ++j) {
        double t = mesh.node(j);
        if (t > beta)
            break;
        best = std::max(best, absolute_weighted_image(T, nu, t) / nu(t));
    }
    double t = std::min(beta, mesh.node(1));
    for (int i = 0; i < 12; ++i, t *= 0.5)
        best = std::max(best, absolute_weighted_image(T, nu, t) / nu(t));
    return best;
}

double sup_unit_norm(const RegularOperator& T)
{
    if (T.empty())
        return 0.0;
    GradedMesh mesh = gain_mesh(T);
    GridFunction image = absolute_unit_image(T, mesh);
    return sup_abs(image);
}

GradedMesh mesh_refined_by_operator(const GradedMesh& mesh, const RegularOperator& T)
{
    GradedMesh out = mesh;
    for (const auto& term : T.point_terms())
        out = GradedMesh::merge(out, term.coefficient.mesh());
    for (const auto& term : T.kernel_terms())
        out = GradedMesh::merge(out, term.mesh());
    return out;
}

Eigen::MatrixXd operator_node_matrix(const RegularOperator& T, const GradedMesh& mesh)
{
    const Eigen::Index n = mesh.node_count();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

    for (const auto& term : T.point_terms()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double t = mesh.node(i);
            double q = term.coefficient(t);
            if (q == 0.0)
                continue;
            double h = term.deviation_at(t);
            Eigen::Index j = mesh.locate(h);
            double w = (h - mesh.node(j)) / (mesh.node(j + 1) - mesh.node(j));
            w = std::clamp(w, 0.0, 1.0);
            A(i, j) += q * (1.0 - w);
            A(i, j + 1) += q * w;
        }
    }

    for (const auto& term : T.kernel_terms()) {
        std::vector<std::vector<double>> segment_pts(mesh.segment_count());
        for (Eigen::Index j = 0; j < mesh.segment_count(); ++j)
            segment_pts[j] = merged_breakpoints(term.mesh(), mesh, mesh.node(j), mesh.node(j + 1));
        for (Eigen::Index i = 0; i < n; ++i) {
            double t = mesh.node(i);
            for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
                double s0 = mesh.node(j), s1 = mesh.node(j + 1);
                const auto& pts = segment_pts[j];
                for (size_t q = 0; q + 1 < pts.size(); ++q) {
                    double a = pts[q], b = pts[q + 1], m = 0.5 * (a + b);
                    auto hat0 = [&](double s) { return (s1 - s) / (s1 - s0); };
                    auto hat1 = [&](double s) { return (s - s0) / (s1 - s0); };
                    A(i, j) += simpson(a, b, term(t, a) * hat0(a), term(t, m) * hat0(m),
                                       term(t, b) * hat0(b));
                    A(i, j + 1) += simpson(a, b, term(t, a) * hat1(a), term(t, m) * hat1(m),
                                           term(t, b) * hat1(b));
                }
            }
        }
    }
    return A;
}

} // namespace singfde
