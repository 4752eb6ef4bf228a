#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/mesh.hpp"

namespace singfde {

/// Quadrature route for the exponential-ratio weights.  Auto uses the
/// closed form whenever p is the mu = 1 power law.
enum class QuadraturePolicy { automatic, closed_form, gauss };

/// int_0^t (s/t)^k f(s) ds, exact per segment for the interpolant.
///
/// Requires k > -1 (so the weight is integrable against bounded f) and
/// t in [0, 1]; t = 0 returns the limit value 0.
double integrate_power_weighted(const GridFunction& f, double k, double t);

/// int_tau^1 (tau/s)^kappa f(s) ds, kappa >= 0, exact per segment.
/// tau = 0 returns the limit value 0 for kappa > 0.
double integrate_power_weighted_right(const GridFunction& f, double kappa, double tau);

/// int_a^b exp(-k * int_s^anchor p) f(s) ds.
///
/// The ratio weight is always formed through the primitive of p (never as a
/// quotient of exponentially large values).  For k > 0 the weight stays
/// bounded only if anchor > 0; for k < 0 only if the interval does not reach
/// into the singularity beyond the anchor.  Unbounded-weight combinations
/// are rejected.
double integrate_ratio_weighted(const GridFunction& f, const SingularCoefficient& p, double k,
                                double a, double b, double anchor,
                                QuadraturePolicy policy = QuadraturePolicy::automatic);

namespace detail {

/// Segment moment int_{s0}^{s1} (s/t)^k * s^extra ds with 0 <= s0 <= s1 <= t,
/// extra in {0, 1}; stable through powers of s/t <= 1.
double power_moment_left(double k, double t, double s0, double s1, int extra);

/// Segment moment int_{s0}^{s1} (tau/s)^kappa * s^extra ds with tau <= s0 <= s1.
double power_moment_right(double kappa, double tau, double s0, double s1, int extra);

} // namespace detail

} // namespace singfde
