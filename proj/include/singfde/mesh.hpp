#pragma once

#include <Eigen/Core>

#include <functional>

namespace singfde {

/// Mesh on [0, b] with nodes clustered at the left endpoint.
///
/// The graded factory places the nodes at t_j = (j/N)^gamma, so consecutive
/// gaps near 0 shrink like gamma * (j/N)^(gamma-1) / N.  Meshes with explicit
/// node lists (refinements, unions, scaled copies) share the same type.
/// Immutable after construction.
class GradedMesh {
public:
    /// N segments (N >= 2), grading exponent gamma >= 1; gamma = 1 is uniform.
    static GradedMesh graded(Eigen::Index segment_count, double gamma);

    /// Explicit strictly increasing nodes, first node must be 0.
    static GradedMesh with_nodes(Eigen::VectorXd nodes);

    Eigen::Index segment_count() const { return nodes_.size() - 1; }
    Eigen::Index node_count() const { return nodes_.size(); }
    double node(Eigen::Index j) const { return nodes_[j]; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    double right_endpoint() const { return nodes_[nodes_.size() - 1]; }

    /// Grading exponent of a graded() mesh, 0 for explicit-node meshes.
    double grading() const { return grading_; }

    /// Index j of the segment [t_j, t_{j+1}] containing t.
    Eigen::Index locate(double t) const;

    /// Copy with every node multiplied by scale in (0, 1].
    GradedMesh scaled(double scale) const;

    /// Sorted union of the node sets (duplicates merged exactly).
    static GradedMesh merge(const GradedMesh& a, const GradedMesh& b);

    bool operator==(const GradedMesh& other) const { return nodes_ == other.nodes_; }

private:
    explicit GradedMesh(Eigen::VectorXd nodes, double grading)
        : nodes_(std::move(nodes)), grading_(grading)
    {
    }

    Eigen::VectorXd nodes_;
    double grading_ = 0.0;
};

/// Piecewise-linear function on a mesh, stored by node values.
///
/// Evaluation between nodes is the linear interpolant; at nodes it returns
/// the stored value exactly.  Immutable after construction.
class GridFunction {
public:
    GridFunction(GradedMesh mesh, Eigen::VectorXd values);

    static GridFunction constant(GradedMesh mesh, double c);
    static GridFunction zero(GradedMesh mesh) { return constant(std::move(mesh), 0.0); }
    static GridFunction sample(GradedMesh mesh, const std::function<double(double)>& fn);

    double operator()(double t) const;

    const GradedMesh& mesh() const { return mesh_; }
    const Eigen::VectorXd& values() const { return values_; }
    double value(Eigen::Index j) const { return values_[j]; }
    Eigen::Index node_count() const { return values_.size(); }

    GridFunction with_values(Eigen::VectorXd values) const
    {
        return GridFunction(mesh_, std::move(values));
    }

private:
    GradedMesh mesh_;
    Eigen::VectorXd values_;
};

/// Exact integral of the interpolant over its full interval.
double integrate(const GridFunction& f);

/// Exact integral of the interpolant over [a, b].
double integrate(const GridFunction& f, double a, double b);

/// Exact integral of |f|, splitting segments at sign changes.
double integrate_abs(const GridFunction& f);

/// Exact integral of f*g on a common mesh (Simpson is exact for quadratics).
double integrate_product(const GridFunction& f, const GridFunction& g);

double sup_abs(const GridFunction& f);

GridFunction operator+(const GridFunction& f, const GridFunction& g);
GridFunction operator-(const GridFunction& f, const GridFunction& g);
GridFunction operator*(double c, const GridFunction& f);

} // namespace singfde
