#include "singfde/quadrature.hpp"

#include "singfde/detail/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace singfde {

namespace detail {

double power_moment_left(double k, double t, double s0, double s1, int extra)
{
    // t * int_{u0}^{u1} u^(k+extra) du * t^extra with u = s/t.
    const double m = k + extra;
    const double u0 = s0 / t;
    const double u1 = s1 / t;
    double base;
    if (m == -1.0)
        base = std::log(u1 / u0);
    else
        base = (std::pow(u1, m + 1.0) - std::pow(u0, m + 1.0)) / (m + 1.0);
    return base * std::pow(t, 1.0 + extra);
}

double power_moment_right(double kappa, double tau, double s0, double s1, int extra)
{
    const double m = extra - kappa;
    double base;
    if (m == -1.0)
        base = std::log(s1 / s0);
    else
        base = (std::pow(s1, m + 1.0) - std::pow(s0, m + 1.0)) / (m + 1.0);
    return std::pow(tau, kappa) * base;
}

namespace {

// f restricted to one segment as c0 + c1 * s.
struct SegmentLine {
    double c0;
    double c1;
};

SegmentLine segment_line(const GridFunction& f, Eigen::Index j)
{
    const auto& m = f.mesh();
    double t0 = m.node(j), t1 = m.node(j + 1);
    double c1 = (f.value(j + 1) - f.value(j)) / (t1 - t0);
    return {f.value(j) - c1 * t0, c1};
}

} // namespace

} // namespace detail

double integrate_power_weighted(const GridFunction& f, double k, double t)
{
    if (k <= -1.0)
        throw std::invalid_argument("integrate_power_weighted: requires k > -1");
    if (t == 0.0)
        return 0.0;
    if (t < 0.0 || t > f.mesh().right_endpoint() + 1e-12)
        throw std::invalid_argument("integrate_power_weighted: t outside the mesh interval");
    t = std::min(t, f.mesh().right_endpoint());

    const auto& mesh = f.mesh();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        double s0 = mesh.node(j);
        if (s0 >= t)
            break;
        double s1 = std::min(mesh.node(j + 1), t);
        auto line = detail::segment_line(f, j);
        sum += line.c0 * detail::power_moment_left(k, t, s0, s1, 0)
             + line.c1 * detail::power_moment_left(k, t, s0, s1, 1);
    }
    return sum;
}

double integrate_power_weighted_right(const GridFunction& f, double kappa, double tau)
{
    if (kappa < 0.0)
        throw std::invalid_argument("integrate_power_weighted_right: requires kappa >= 0");
    if (tau == 0.0 && kappa > 0.0)
        return 0.0;
    const auto& mesh = f.mesh();
    const double top = mesh.right_endpoint();
    if (tau < 0.0 || tau > top + 1e-12)
        throw std::invalid_argument("integrate_power_weighted_right: tau outside the mesh interval");
    tau = std::min(tau, top);

    double sum = 0.0;
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        double s1 = mesh.node(j + 1);
        if (s1 <= tau)
            continue;
        double s0 = std::max(mesh.node(j), tau);
        if (s0 >= s1)
            continue;
        auto line = detail::segment_line(f, j);
        sum += line.c0 * detail::power_moment_right(kappa, tau, s0, s1, 0)
             + line.c1 * detail::power_moment_right(kappa, tau, s0, s1, 1);
    }
    return sum;
}

double integrate_ratio_weighted(const GridFunction& f, const SingularCoefficient& p, double k,
                                double a, double b, double anchor, QuadraturePolicy policy)
{
    if (a < 0.0 || a > b || b > f.mesh().right_endpoint() + 1e-12)
        throw std::invalid_argument("integrate_ratio_weighted: need 0 <= a <= b within the mesh");
    if (a == b)
        return 0.0;
    if (k > 0.0 && anchor == 0.0)
        throw std::invalid_argument("integrate_ratio_weighted: weight unbounded (anchor = 0, k > 0)");
    if (k < 0.0 && a == 0.0 && anchor > 0.0)
        throw std::invalid_argument("integrate_ratio_weighted: weight unbounded at s = 0 for k < 0");

    const bool power1 =
        p.kind() == SingularCoefficient::Kind::power_law && p.exponent() == 1.0;
    const bool closed = policy == QuadraturePolicy::closed_form ||
                        (policy == QuadraturePolicy::automatic && power1);
    if (closed && !power1)
        throw std::invalid_argument("integrate_ratio_weighted: closed form only for the 1/t coefficient");

    const auto& mesh = f.mesh();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        double s0 = std::max(mesh.node(j), a);
        double s1 = std::min(mesh.node(j + 1), b);
        if (s0 >= s1)
            continue;
        auto line = detail::segment_line(f, j);
        if (closed) {
            // exp(-k int_s^anchor dt/t) = (s/anchor)^k
            if (s1 <= anchor) {
                sum += line.c0 * detail::power_moment_left(k, anchor, s0, s1, 0)
                     + line.c1 * detail::power_moment_left(k, anchor, s0, s1, 1);
            } else if (s0 >= anchor) {
                sum += line.c0 * detail::power_moment_right(-k, anchor, s0, s1, 0)
                     + line.c1 * detail::power_moment_right(-k, anchor, s0, s1, 1);
            } else {
                sum += line.c0 * detail::power_moment_left(k, anchor, s0, anchor, 0)
                     + line.c1 * detail::power_moment_left(k, anchor, s0, anchor, 1)
                     + line.c0 * detail::power_moment_right(-k, anchor, anchor, s1, 0)
                     + line.c1 * detail::power_moment_right(-k, anchor, anchor, s1, 1);
            }
        } else {
            auto integrand = [&](double s) {
                double w = s <= anchor ? std::exp(-k * p.primitive_unsafe(s, anchor))
                                       : std::exp(k * p.primitive_unsafe(anchor, s));
                return w * (line.c0 + line.c1 * s);
            };
            sum += detail::gauss_segment(integrand, s0, s1);
        }
    }
    return sum;
}

} // namespace singfde
