#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/criteria.hpp"
#include "singfde/operators.hpp"
#include "singfde/solver.hpp"

#include <string>

namespace singfde {

/// Problem data for equations whose right-hand side carries the singular
/// factor p in every term: x'/p = -k x + (Tx) + f, with f measured in the
/// sup norm.  nu_on_operator controls whether the operator term carries the
/// improving weight factor nu (the easier problem) or not (the problem
/// governed by the strict gain criterion).
struct WeightedProblem {
    double k = 1.0;
    SingularCoefficient p = SingularCoefficient::power_law(1.0);
    WeightFunction nu = WeightFunction::power(1.0);
    RegularOperator T;
    GridFunction f;
    double c = 0.0; // right endpoint value, k < 0 problems only
    bool nu_on_operator = true;
};

struct AlphaReport {
    double alpha = 0.0;
    /// max over t in (0, alpha] of K_alpha(t) = int_t^alpha [x_a(t)/x_a(s)] p nu ds.
    double max_k_alpha = 0.0;
    /// |k| * max(K_alpha/nu) / (1 + eps0); the Picard map on [0, alpha]
    /// contracts with factor (gain/|k|) * (1 + eps0) * this.
    double contraction_factor = 0.0;
    bool admissible = false;
};

/// Profile of the kernel mass function on [0, alpha] for k < 0.
/// K_alpha vanishes at both endpoints; its weighted maximum controls the
/// contraction factor of the shrunken-interval fixed point map.
AlphaReport k_alpha_profile(const SingularCoefficient& p, const WeightFunction& nu, double k,
                            double alpha, double eps0 = 0.1);

/// lim_{t->0} nu'(t) / (p(t) nu(t)) = 0, tested on the samples
/// 1e-2 .. 1e-5: the ratio must decrease strictly and either drop below
/// 1e-2 or at least halve across the ladder (the logarithmic weight decays
/// only like 1/ln t).
bool nu_condition_check(const SingularCoefficient& p, const WeightFunction& nu);

/// Cauchy problem for k > 0, Picard iteration on x = A T x + A(nu f) in the
/// nu-weighted sup norm.  Preconditions (refused otherwise): Volterra T with
/// the weight on the operator, or sup-norm small enough, or the strict gain
/// criterion for the unweighted-operator problem.
SolveReport solve_weighted_plus(const WeightedProblem& prob, double tol);

/// Problem on [0, alpha] with x(alpha) = c, k < 0; alpha must be admissible
/// (k_alpha_profile or nu(alpha)||T||/|k| <= 1).
SolveReport solve_weighted_minus(const WeightedProblem& prob, double alpha, double tol);

/// Largest alpha from a geometric scan that passes the admissibility test
/// for the given problem; 0 when none does.
double largest_admissible_alpha(const WeightedProblem& prob, double eps0 = 0.1);

/// One application of the weighted kernel operator on the mesh of z:
/// int_0^t [x1(t)/x1(s)] p(s) [nu(s)] z(s) ds for k > 0, and
/// -int_t^b [x1(t)/x1(s)] p(s) [nu(s)] z(s) ds for k < 0 (b the mesh right
/// endpoint).  Pass nu = nullptr for the kernels without the weight factor.
GridFunction weighted_kernel_apply(double k, const SingularCoefficient& p,
                                   const WeightFunction* nu, const GridFunction& z);

struct EssentialityReport {
    /// False when p*nu is integrable (the demonstration does not apply).
    bool applicable = false;
    bool non_convergence_flagged = false;
    int iterations = 0;
    double first_weighted_norm = 0.0;
    double last_weighted_norm = 0.0;
    std::string note;
};

/// Runs the Picard iteration of the k > 0 problem with T = k * identity,
/// exactly at the boundary of the strict gain criterion.  The equation
/// degenerates to x' = p nu f, which has no admissible solution when p nu
/// is not integrable; the iterate norms grow without settling.
EssentialityReport essentiality_demo(double k, const SingularCoefficient& p,
                                     const WeightFunction& nu, const GridFunction& f);

} // namespace singfde
