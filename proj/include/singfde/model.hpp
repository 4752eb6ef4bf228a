#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/mesh.hpp"
#include "singfde/operators.hpp"
#include "singfde/quadrature.hpp"

#include <Eigen/Core>

namespace singfde {

/// Which half of the constant range a problem lives in: plus is k > 0 with
/// the initial condition at 0, minus is k < 0 with the condition at 1.
enum class ProblemSign { plus, minus };

/// Unique solution of x' = -k p x + f with x(1) = c, for k < 0.
///
///   x(t) = x1(t) * c - int_t^1 [x1(t)/x1(s)] f(s) ds,  x1(t) = exp(k int_t^1 p),
///
/// with the limit value x(0) = 0 assigned at the left node.
GridFunction solve_model_minus(double k, const SingularCoefficient& p, const GridFunction& f,
                               double c, QuadraturePolicy policy = QuadraturePolicy::automatic);

struct ModelPlusSolution {
    GridFunction solution;
    /// x(1) = int_0^1 f(s)/x1(s) ds, the value compatible with a finite limit at 0.
    double compatibility_value = 0.0;
};

/// Unique solution of x' = -k p x + f with a finite limit at 0, for k > 0:
/// x(t) = int_0^t [x1(t)/x1(s)] f(s) ds.
ModelPlusSolution solve_model_plus(double k, const SingularCoefficient& p, const GridFunction& f,
                                   QuadraturePolicy policy = QuadraturePolicy::automatic);

/// The inverses of the model problems:
///   (Lambda+ z)(t) =  int_0^t [x1(t)/x1(s)] z(s) ds   (k > 0),
///   (Lambda- z)(t) = -int_t^1 [x1(t)/x1(s)] z(s) ds   (k < 0).
/// Both are contractions L1 -> C and vanish at t = 0.
GridFunction lambda_apply(ProblemSign sign, double k, const SingularCoefficient& p,
                          const GridFunction& z,
                          QuadraturePolicy policy = QuadraturePolicy::automatic);

/// Matrix form of Lambda on the mesh (node values -> node values).
Eigen::MatrixXd lambda_node_matrix(ProblemSign sign, double k, const SingularCoefficient& p,
                                   const GradedMesh& mesh,
                                   QuadraturePolicy policy = QuadraturePolicy::automatic);

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;
    /// True when iteration stalled and the operator-norm product bound
    /// ||Lambda|| * ||T|| is reported instead (a conservative upper estimate).
    bool from_norm_bound = false;
    int iterations = 0;
};

/// Dominant-eigenvalue magnitude of the discretized composition Lambda T,
/// by power iteration (start vector 1, relative change < 1e-10, 500 steps)
/// with a dense eigensolver fallback.
SpectralEstimate spectral_radius_estimate(ProblemSign sign, double k,
                                          const SingularCoefficient& p, const RegularOperator& T,
                                          const GradedMesh& mesh);

} // namespace singfde
