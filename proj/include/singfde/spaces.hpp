#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/extended.hpp"
#include "singfde/mesh.hpp"

#include <optional>

namespace singfde {

/// Tag naming the solution space a function or report lives in.
struct SpaceTag {
    enum class Kind { d_plus, d_minus, absolutely_continuous, continuous, l1, weighted_linf };

    Kind kind = Kind::absolutely_continuous;
    double k = 0.0;

    static SpaceTag d_plus(double k) { return {Kind::d_plus, k}; }
    static SpaceTag d_minus(double k) { return {Kind::d_minus, k}; }
};

/// |x(1)| + int_0^1 |x'|, exact for the interpolant.
double ac_norm(const GridFunction& x);

/// |x(1)| + int_0^1 |x'(s) + k p(s) x(s)| ds for k != 0.
///
/// The improper part next to 0 is classified in closed form (the first
/// segment is exactly linear, and p has a declared power tail), so the
/// divergence marker is exact for the representable class.
ExtendedReal d_norm(const GridFunction& x, double k, const SingularCoefficient& p);

/// ||x||_AC - 2 ||x||_D; nonpositive on the whole space.  Empty when the
/// D-norm diverges.
std::optional<double> embedding_defect(const GridFunction& x, double k,
                                       const SingularCoefficient& p);

/// Membership in { x absolutely continuous : x(0) = 0, int |x(t)|/t dt finite }.
struct Wac0Verdict {
    enum class Reason { member, nonzero_at_origin, integral_diverges };

    bool member = false;
    Reason reason = Reason::member;
    ExtendedReal integral; // int_0^1 |x(t)|/t of the interpolant
};

/// For the piecewise-linear interpolant itself the integral is finite
/// whenever x(0) = 0; the divergence branch is a proxy that inspects the
/// decay of dyadic shell contributions near 0 and flags samples of
/// divergent underlying functions.  Shell decay slower than 0.8 per
/// halving is treated as divergent, which misclassifies tails flatter
/// than roughly t^0.32.
Wac0Verdict wac0_membership(const GridFunction& x);

/// (1/t) int_0^t f(s) ds sampled on the mesh of f; value at t = 0 is f(0).
GridFunction cesaro_average(const GridFunction& f);

} // namespace singfde
