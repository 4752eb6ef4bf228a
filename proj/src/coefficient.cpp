#include "singfde/coefficient.hpp"

#include "singfde/detail/gauss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace singfde {

namespace {

// int_a^b t^(-mu) dt for 0 < a <= b, closed form.
double power_tail_integral(double a, double b, double mu)
{
    if (a >= b)
        return 0.0;
    if (mu == 1.0)
        return std::log(b / a);
    return (std::pow(a, 1.0 - mu) - std::pow(b, 1.0 - mu)) / (mu - 1.0);
}

} // namespace

SingularCoefficient SingularCoefficient::power_law(double mu)
{
    if (mu < 1.0)
        throw std::invalid_argument("SingularCoefficient: power-law exponent must be >= 1");
    SingularCoefficient p;
    p.kind_ = Kind::power_law;
    p.mu_ = mu;
    return p;
}

SingularCoefficient SingularCoefficient::tabulated(GridFunction values, double eps, double tail_mu)
{
    if (!(eps > 0.0) || eps >= values.mesh().right_endpoint())
        throw std::invalid_argument("SingularCoefficient: tail split eps out of range");
    if (tail_mu < 1.0)
        throw std::invalid_argument("SingularCoefficient: tail exponent must be >= 1");
    for (Eigen::Index j = 0; j < values.node_count(); ++j)
        if (values.mesh().node(j) >= eps && !(values.value(j) > 0.0))
            throw std::invalid_argument("SingularCoefficient: tabulated values must be positive");
    if (!(values(eps) > 0.0))
        throw std::invalid_argument("SingularCoefficient: p(eps) must be positive");

    SingularCoefficient p;
    p.kind_ = Kind::tabulated;
    p.eps_ = eps;
    p.tail_mu_ = tail_mu;
    p.tail_scale_ = values(eps) * std::pow(eps, tail_mu);

    // Prefix integrals of the tabulated part from eps to each node.
    const auto& mesh = values.mesh();
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(mesh.node_count());
    for (Eigen::Index j = 0; j + 1 < mesh.node_count(); ++j) {
        double lo = std::max(mesh.node(j), eps);
        double hi = mesh.node(j + 1);
        double piece = 0.0;
        if (hi > lo)
            piece = 0.5 * (hi - lo) * (values(lo) + values(hi));
        prefix[j + 1] = prefix[j] + piece;
    }
    p.table_prefix_ = std::move(prefix);
    p.table_ = std::move(values);
    return p;
}

double SingularCoefficient::operator()(double t) const
{
    if (!(t > 0.0))
        throw std::domain_error("SingularCoefficient: evaluation requires t > 0");
    if (kind_ == Kind::power_law)
        return std::pow(t, -mu_);
    if (t < eps_)
        return tail_scale_ * std::pow(t, -tail_mu_);
    return (*table_)(t);
}

double SingularCoefficient::primitive_unsafe(double s, double t) const
{
    if (s > t || s < 0.0)
        throw std::invalid_argument("SingularCoefficient: primitive needs 0 <= s <= t");
    if (s == t)
        return 0.0;
    if (s == 0.0)
        return std::numeric_limits<double>::infinity();

    if (kind_ == Kind::power_law)
        return power_tail_integral(s, t, mu_);

    double total = 0.0;
    if (s < eps_)
        total += tail_scale_ * power_tail_integral(s, std::min(t, eps_), tail_mu_);
    double a = std::max(s, eps_);
    if (t > a) {
        const auto& mesh = table_->mesh();
        Eigen::Index ja = mesh.locate(a);
        Eigen::Index jb = mesh.locate(t);
        if (ja == jb) {
            total += 0.5 * (t - a) * ((*table_)(a) + (*table_)(t));
        } else {
            total += 0.5 * (mesh.node(ja + 1) - a) * ((*table_)(a) + (*table_)(mesh.node(ja + 1)));
            total += table_prefix_[jb] - table_prefix_[ja + 1];
            total += 0.5 * (t - mesh.node(jb)) * ((*table_)(mesh.node(jb)) + (*table_)(t));
        }
    }
    return total;
}

ExtendedReal SingularCoefficient::primitive(double s, double t) const
{
    double v = primitive_unsafe(s, t);
    if (std::isinf(v))
        return ExtendedReal::infinity();
    return ExtendedReal::finite(v);
}

double decay(const SingularCoefficient& p, double kappa, double lo, double hi)
{
    if (kappa < 0.0)
        throw std::invalid_argument("decay: kappa must be nonnegative");
    if (lo > hi)
        throw std::invalid_argument("decay: lo > hi");
    if (kappa == 0.0 || lo == hi)
        return 1.0;
    if (lo == 0.0)
        return 0.0;
    if (p.kind() == SingularCoefficient::Kind::power_law && p.exponent() == 1.0)
        return std::pow(lo / hi, kappa);
    return std::exp(-kappa * p.primitive_unsafe(lo, hi));
}

WeightFunction WeightFunction::power(double r)
{
    if (!(r > 0.0))
        throw std::invalid_argument("WeightFunction: power exponent must be positive");
    WeightFunction nu;
    nu.kind_ = Kind::power;
    nu.r_ = r;
    return nu;
}

WeightFunction WeightFunction::log_weight()
{
    WeightFunction nu;
    nu.kind_ = Kind::log;
    return nu;
}

WeightFunction WeightFunction::one()
{
    WeightFunction nu;
    nu.kind_ = Kind::one;
    return nu;
}

WeightFunction WeightFunction::tabulated(GridFunction values)
{
    if (values.value(0) != 0.0)
        throw std::invalid_argument("WeightFunction: tabulated weight must vanish at 0");
    for (Eigen::Index j = 1; j < values.node_count(); ++j)
        if (!(values.value(j) > values.value(j - 1)))
            throw std::invalid_argument("WeightFunction: tabulated weight must increase strictly");
    WeightFunction nu;
    nu.kind_ = Kind::tabulated;
    nu.table_ = std::move(values);
    return nu;
}

double WeightFunction::operator()(double t) const
{
    switch (kind_) {
    case Kind::power:
        return t == 0.0 ? 0.0 : std::pow(t, r_);
    case Kind::log:
        return t == 0.0 ? 0.0 : -1.0 / std::log(0.5 * t);
    case Kind::one:
        return 1.0;
    case Kind::tabulated:
        return (*table_)(t);
    }
    return 0.0;
}

double WeightFunction::derivative(double t) const
{
    if (!(t > 0.0))
        throw std::domain_error("WeightFunction: derivative requires t > 0");
    switch (kind_) {
    case Kind::power:
        return r_ * std::pow(t, r_ - 1.0);
    case Kind::log: {
        double l = std::log(0.5 * t);
        return 1.0 / (t * l * l);
    }
    case Kind::one:
        return 0.0;
    case Kind::tabulated:
        throw std::logic_error("WeightFunction: tabulated weight is not differentiable");
    }
    return 0.0;
}

bool pnu_integrable(const SingularCoefficient& p, const WeightFunction& nu)
{
    const double mu = p.tail_exponent();
    switch (nu.kind()) {
    case WeightFunction::Kind::power:
        return nu.exponent() > mu - 1.0;
    case WeightFunction::Kind::log:
        return false; // t^(-mu) / ln(2/t) diverges for every mu >= 1
    case WeightFunction::Kind::one:
        return false; // p itself is non-integrable by definition
    case WeightFunction::Kind::tabulated:
        return pnu_integrable_numeric(p, nu);
    }
    return false;
}

bool pnu_integrable_numeric(const SingularCoefficient& p, const WeightFunction& nu)
{
    auto integrand = [&](double t) { return p(t) * nu(t); };

    // Shell integrals over [4^-(m+1), 4^-m]; each shell split into
    // geometric panels so the power-law variation is resolved.
    auto shell = [&](int m) {
        double hi = std::pow(4.0, -m);
        double lo = 0.25 * hi;
        double s = 0.0;
        double a = lo;
        for (int panel = 0; panel < 4; ++panel) {
            double b = a * std::sqrt(2.0);
            s += detail::gauss_segment(integrand, a, std::min(b, hi));
            a = b;
        }
        return s;
    };

    double prev = shell(4);
    int slow = 0;
    for (int m = 5; m <= 14; ++m) {
        double cur = shell(m);
        if (prev > 0.0 && cur / prev >= 0.9)
            ++slow;
        else
            slow = 0;
        if (slow >= 3)
            return false;
        prev = cur;
    }
    return true;
}

} // namespace singfde
