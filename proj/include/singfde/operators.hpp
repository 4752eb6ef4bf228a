#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/extended.hpp"
#include "singfde/mesh.hpp"

#include <Eigen/Core>

#include <utility>
#include <variant>
#include <vector>

namespace singfde {

/// One term q(t) * x(h(t)) with an integrable coefficient q and a deviation
/// h mapping [0,1] into [0,1] (a constant or a grid function).
struct PointTerm {
    GridFunction coefficient;
    std::variant<double, GridFunction> deviation;

    double deviation_at(double t) const;
};

/// One term int_0^1 K(t,s) x(s) ds with K piecewise-bilinear on mesh x mesh.
class KernelTerm {
public:
    KernelTerm(GradedMesh mesh, Eigen::MatrixXd values);

    const GradedMesh& mesh() const { return mesh_; }
    const Eigen::MatrixXd& values() const { return values_; }

    /// Bilinear interpolation of K(t, s).
    double operator()(double t, double s) const;

private:
    GradedMesh mesh_;
    Eigen::MatrixXd values_; // values_(i, j) = K(t_i, s_j)
};

/// Bounded operator C -> L given as a finite sum of point-evaluation and
/// kernel terms.  The positive/negative parts are the pointwise splits of
/// the coefficient data (q+ = max(q, 0) and likewise for kernels), taken
/// term by term.
class RegularOperator {
public:
    RegularOperator() = default;
    RegularOperator(std::vector<PointTerm> points, std::vector<KernelTerm> kernels)
        : points_(std::move(points)), kernels_(std::move(kernels))
    {
    }

    static RegularOperator zero() { return {}; }
    static RegularOperator single_point(GridFunction q, std::variant<double, GridFunction> h);

    const std::vector<PointTerm>& point_terms() const { return points_; }
    const std::vector<KernelTerm>& kernel_terms() const { return kernels_; }
    bool empty() const { return points_.empty() && kernels_.empty(); }

private:
    std::vector<PointTerm> points_;
    std::vector<KernelTerm> kernels_;
};

enum class OperatorPart { plus, minus };

/// (Tx) sampled on the mesh of x.
GridFunction apply(const RegularOperator& T, const GridFunction& x);

/// (T+ x) or (T- x); both parts map nonnegative functions to nonnegative ones.
GridFunction apply_part(const RegularOperator& T, const GridFunction& x, OperatorPart part);

/// (|T| 1)(t) sampled on the given mesh, |T| = T+ + T-.
GridFunction absolute_unit_image(const RegularOperator& T, const GradedMesh& mesh);

/// C -> L norms of the two parts: ||T+-|| = int_0^1 (T+- 1)(t) dt.
std::pair<double, double> part_norms(const RegularOperator& T);

enum class VolterraClass { volterra, anti_volterra, both, neither };

/// Node-wise classification: Volterra needs h(t) <= t and kernels vanishing
/// for s > t; anti-Volterra (with respect to t = 1) is the mirror.
VolterraClass classify_volterra(const RegularOperator& T);

bool is_volterra(const RegularOperator& T);
bool is_anti_volterra(const RegularOperator& T);

/// vraisup_t (|T| nu)(t) / nu(t), estimated as the node maximum refined by a
/// dyadic ladder next to 0; diverging ladders yield the infinity marker.
/// The estimate is a lower bound on the essential supremum.
ExtendedReal weighted_gain(const RegularOperator& T, const WeightFunction& nu);

/// sup of the same ratio restricted to (0, beta] (diagnostic for the
/// limsup-at-0 variant of the gain).
double weighted_gain_near_zero(const RegularOperator& T, const WeightFunction& nu, double beta);

/// vraisup_t (|T| 1)(t): the C -> Linf norm used by the weighted solvers.
double sup_unit_norm(const RegularOperator& T);

/// Mesh whose node set also resolves every coefficient/kernel breakpoint of T.
GradedMesh mesh_refined_by_operator(const GradedMesh& mesh, const RegularOperator& T);

/// Matrix mapping node values of x to node values of (Tx) on the mesh.
Eigen::MatrixXd operator_node_matrix(const RegularOperator& T, const GradedMesh& mesh);

} // namespace singfde
