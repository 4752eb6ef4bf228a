#pragma once

#include "singfde/extended.hpp"
#include "singfde/mesh.hpp"

#include <optional>

namespace singfde {

/// Coefficient p(t) > 0 on (0,1], integrable on every [eps,1] but with
/// a non-integrable singularity at 0: int_eps^1 p -> +inf as eps -> 0.
///
/// PowerLaw(mu): p(t) = t^(-mu), mu >= 1.  Tabulated: node values on
/// [eps, 1] continued by the power-law tail p(eps) * (eps/t)^tail_mu
/// on (0, eps).
class SingularCoefficient {
public:
    enum class Kind { power_law, tabulated };

    static SingularCoefficient power_law(double mu);
    static SingularCoefficient tabulated(GridFunction values, double eps, double tail_mu);

    Kind kind() const { return kind_; }
    double exponent() const { return mu_; }

    /// Exponent of the power-law behaviour at 0 (mu, or the declared tail).
    double tail_exponent() const { return kind_ == Kind::power_law ? mu_ : tail_mu_; }

    /// p(t) = tail_scale() * t^(-tail_exponent()) holds exactly on (0, tail_split()).
    double tail_split() const { return kind_ == Kind::power_law ? 1.0 : eps_; }
    double tail_scale() const { return kind_ == Kind::power_law ? 1.0 : tail_scale_; }

    /// p(t) for t in (0, 1].
    double operator()(double t) const;

    /// P(s, t) = int_s^t p, 0 <= s <= t <= 1.  s = 0 gives the divergence marker.
    ExtendedReal primitive(double s, double t) const;

    /// Same as primitive() but with IEEE +inf for the divergent case; the
    /// callers feed it straight into exp(-kappa * P) where exp(-inf) = 0.
    double primitive_unsafe(double s, double t) const;

private:
    SingularCoefficient() = default;

    Kind kind_ = Kind::power_law;
    double mu_ = 1.0;
    // tabulated part
    std::optional<GridFunction> table_;
    Eigen::VectorXd table_prefix_; // int_{eps}^{node_j} of the tabulated part
    double eps_ = 0.0;
    double tail_mu_ = 1.0;
    double tail_scale_ = 1.0; // p(t) = tail_scale * t^(-tail_mu) on (0, eps)
};

/// exp(-kappa * int_lo^hi p) for kappa >= 0; equals (lo/hi)^kappa for the
/// mu = 1 power law (computed exactly through pow).  Returns 0 at lo = 0.
double decay(const SingularCoefficient& p, double kappa, double lo, double hi);

/// Increasing weight nu with nu(0) = 0.
///
/// Power(r): nu(t) = t^r, r > 0.  Log: nu(t) = -1/ln(t/2).  One() is the
/// constant weight used only by consistency diagnostics (it violates
/// nu(0) = 0 on purpose).  Tabulated weights are not differentiable.
class WeightFunction {
public:
    enum class Kind { power, log, one, tabulated };

    static WeightFunction power(double r);
    static WeightFunction log_weight();
    static WeightFunction one();
    static WeightFunction tabulated(GridFunction values);

    Kind kind() const { return kind_; }
    double exponent() const { return r_; }

    double operator()(double t) const;
    bool differentiable() const { return kind_ != Kind::tabulated; }
    double derivative(double t) const; // t > 0

private:
    WeightFunction() = default;

    Kind kind_ = Kind::power;
    double r_ = 1.0;
    std::optional<GridFunction> table_;
};

/// Whether p * nu is integrable near 0 (closed-form rule for the known kinds).
bool pnu_integrable(const SingularCoefficient& p, const WeightFunction& nu);

/// Numerical proxy for the same question: integrates p*nu over [delta, 1]
/// for a geometric ladder of delta and tests whether the increments keep a
/// non-vanishing share of the total (documented to misclassify extremely
/// slowly convergent tails).
bool pnu_integrable_numeric(const SingularCoefficient& p, const WeightFunction& nu);

} // namespace singfde
