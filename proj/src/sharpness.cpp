#include "singfde/sharpness.hpp"

#include "singfde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace singfde {

namespace {

constexpr double kChoiceTol = 1e-12;

void validate_config(ProblemSign sign, double k, const TwoPointConfig& cfg)
{
    if (!(cfg.t1 >= 0.0 && cfg.t1 < cfg.t2 && cfg.t2 <= 1.0))
        throw std::invalid_argument("TwoPointConfig: need 0 <= t1 < t2 <= 1");
    if (cfg.mass_plus_1 < 0.0 || cfg.mass_plus_2 < 0.0 || cfg.mass_minus_1 < 0.0 ||
        cfg.mass_minus_2 < 0.0)
        throw std::invalid_argument("TwoPointConfig: masses must be nonnegative");
    auto is = [](double a, double b) { return std::abs(a - b) <= kChoiceTol; };
    if (sign == ProblemSign::plus) {
        if (!(k > 0.0))
            throw std::invalid_argument("delta1: plus case requires k > 0");
        if (!is(cfg.conc_plus, 0.0) && !is(cfg.conc_plus, cfg.mass_plus_1))
            throw std::invalid_argument("delta1: conc_plus must be 0 or mass_plus_1");
        if (!is(cfg.conc_minus, 0.0) && !is(cfg.conc_minus, cfg.mass_minus_1))
            throw std::invalid_argument("delta1: conc_minus must be 0 or mass_minus_1");
    } else {
        if (!(k < 0.0))
            throw std::invalid_argument("delta1: minus case requires k < 0");
        double low = std::pow(cfg.t2, std::abs(k));
        if (!is(cfg.conc_plus, 1.0) && !is(cfg.conc_plus, low))
            throw std::invalid_argument("delta1: conc_plus must be 1 or t2^|k|");
        if (!is(cfg.conc_minus, 1.0) && !is(cfg.conc_minus, low))
            throw std::invalid_argument("delta1: conc_minus must be 1 or t2^|k|");
    }
}

double determinant2(double e11, double e12, double e21, double e22)
{
    return e11 * e22 - e12 * e21;
}

double delta1_plus(double a, double kp, double km, double m2p, double m2m)
{
    return determinant2(1.0 - kp, km, -a * kp + m2m, a * km + 1.0 - m2p);
}

double delta1_minus(double b, double kp, double km, double m1p, double m1m, double m2p, double m2m)
{
    return determinant2(1.0 - m1m + b * m2p * kp, m1p - b * m2m * km, m2p * kp, 1.0 - m2m * km);
}

} // namespace

double delta1(ProblemSign sign, double k, const TwoPointConfig& cfg)
{
    validate_config(sign, k, cfg);
    const double ratio = std::pow(cfg.t1 / cfg.t2, std::abs(k));
    if (sign == ProblemSign::plus)
        return delta1_plus(ratio, cfg.conc_plus, cfg.conc_minus, cfg.mass_plus_2,
                           cfg.mass_minus_2);
    return delta1_minus(ratio, cfg.conc_plus, cfg.conc_minus, cfg.mass_plus_1, cfg.mass_minus_1,
                        cfg.mass_plus_2, cfg.mass_minus_2);
}

double delta_full(ProblemSign sign, double k, const GridFunction& p1, const GridFunction& p2,
                  double t1, double t2)
{
    if (!(t1 >= 0.0 && t1 < t2 && t2 <= 1.0))
        throw std::invalid_argument("delta_full: need 0 <= t1 < t2 <= 1");
    if (sign == ProblemSign::plus) {
        if (!(k > 0.0))
            throw std::invalid_argument("delta_full: plus case requires k > 0");
        double w11 = integrate_power_weighted(p1, k, t1);
        double w12 = integrate_power_weighted(p2, k, t1);
        double w21 = integrate_power_weighted(p1, k, t2);
        double w22 = integrate_power_weighted(p2, k, t2);
        return determinant2(1.0 - w11, -w12, -w21, 1.0 - w22);
    }
    if (!(k < 0.0))
        throw std::invalid_argument("delta_full: minus case requires k < 0");
    const double kappa = -k;
    double v11 = integrate_power_weighted_right(p1, kappa, t1);
    double v12 = integrate_power_weighted_right(p2, kappa, t1);
    double v21 = integrate_power_weighted_right(p1, kappa, t2);
    double v22 = integrate_power_weighted_right(p2, kappa, t2);
    return determinant2(1.0 + v11, v12, v21, 1.0 + v22);
}

std::pair<double, double> two_point_norms(const GridFunction& p1, const GridFunction& p2)
{
    double plus = 0.5 * (integrate_abs(p1) + integrate(p1))
                + 0.5 * (integrate_abs(p2) + integrate(p2));
    double minus = 0.5 * (integrate_abs(p1) - integrate(p1))
                 + 0.5 * (integrate_abs(p2) - integrate(p2));
    return {plus, minus};
}

Delta1Minimum minimize_delta1(ProblemSign sign, double k, double t_plus, double t_minus,
                              int resolution)
{
    if (resolution < 8)
        throw std::invalid_argument("minimize_delta1: resolution must be >= 8");
    if (t_plus < 0.0 || t_minus < 0.0)
        throw std::invalid_argument("minimize_delta1: norms must be nonnegative");
    if (sign == ProblemSign::plus && !(k > 0.0))
        throw std::invalid_argument("minimize_delta1: plus case requires k > 0");
    if (sign == ProblemSign::minus && !(k < 0.0))
        throw std::invalid_argument("minimize_delta1: minus case requires k < 0");

    const int R = resolution;
    const double kappa = std::abs(k);
    const double t2_first = 1.0 / R;

    Delta1Minimum best;
    best.value = std::numeric_limits<double>::infinity();
    auto consider = [&](double value, const TwoPointConfig& cfg) {
        if (value < best.value) {
            best.value = value;
            best.argmin = cfg;
        }
    };

    // delta1 = c0 + slope * (t1/t2)^|k| with slope >= 0 (slope is K- for the
    // plus case and M2+ K+ for the minus case), so over the triangular
    // (t1, t2) grid the minimum sits at t1 = 0, with the smallest grid t2
    // first in enumeration order.  The masses and concentration choices are
    // enumerated in full.
    if (sign == ProblemSign::plus) {
        for (int ip = 0; ip <= R; ++ip) {
            const double m1p = t_plus * ip / R;
            const double m2p = t_plus - m1p;
            for (int im = 0; im <= R; ++im) {
                const double m1m = t_minus * im / R;
                const double m2m = t_minus - m1m;
                for (double kp : {0.0, m1p}) {
                    for (double km : {0.0, m1m}) {
                        double value = delta1_plus(0.0, kp, km, m2p, m2m);
                        consider(value, TwoPointConfig{0.0, t2_first, m1p, m2p, m1m, m2m, kp, km});
                        if (m1m == 0.0)
                            break;
                    }
                    if (m1p == 0.0)
                        break;
                }
            }
        }
        return best;
    }

    for (int j = 1; j <= R; ++j) {
        const double t2 = static_cast<double>(j) / R;
        const double choice_low = std::pow(t2, kappa);
        for (int ip = 0; ip <= R; ++ip) {
            const double m1p = t_plus * ip / R;
            const double m2p = t_plus - m1p;
            for (int im = 0; im <= R; ++im) {
                const double m1m = t_minus * im / R;
                const double m2m = t_minus - m1m;
                for (double kp : {1.0, choice_low}) {
                    for (double km : {1.0, choice_low}) {
                        double value = delta1_minus(0.0, kp, km, m1p, m1m, m2p, m2m);
                        consider(value, TwoPointConfig{0.0, t2, m1p, m2p, m1m, m2m, kp, km});
                        if (choice_low == 1.0)
                            break;
                    }
                    if (choice_low == 1.0)
                        break;
                }
            }
        }
    }
    return best;
}

TwoPointConfig extremal_config(ProblemSign sign, double t_plus, double t_minus, double t2)
{
    TwoPointConfig cfg;
    cfg.t1 = 0.0;
    cfg.t2 = t2;
    if (sign == ProblemSign::plus) {
        cfg.mass_plus_1 = 0.0;
        cfg.mass_plus_2 = t_plus;
        cfg.mass_minus_1 = 0.5 * t_minus;
        cfg.mass_minus_2 = 0.5 * t_minus;
        cfg.conc_plus = 0.0;
        cfg.conc_minus = cfg.mass_minus_1;
    } else {
        cfg.mass_plus_1 = 0.5 * t_plus;
        cfg.mass_plus_2 = 0.5 * t_plus;
        cfg.mass_minus_1 = 0.0;
        cfg.mass_minus_2 = t_minus;
        cfg.conc_plus = 1.0;
        cfg.conc_minus = 1.0;
    }
    return cfg;
}

namespace {

// Triangular bump of exact prescribed mass with peak at the attachment end:
// side == right gives support [c, c + w] (used at interval left endpoints),
// side == left gives [c - w, c].
enum class BumpSide { left, right };

struct Bump {
    double mass = 0.0;
    double point = 0.0;
    double width = 0.0;
    BumpSide side = BumpSide::left;

    double lo() const { return side == BumpSide::left ? point - width : point; }
    double hi() const { return side == BumpSide::left ? point : point + width; }
};

GridFunction bumps_to_grid(const std::vector<Bump>& bumps)
{
    std::vector<double> nodes{0.0, 1.0};
    for (const auto& b : bumps) {
        if (b.mass == 0.0)
            continue;
        nodes.push_back(b.lo());
        nodes.push_back(0.5 * (b.lo() + b.hi()));
        nodes.push_back(b.hi());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    Eigen::VectorXd node_vec =
        Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
    GradedMesh mesh = GradedMesh::with_nodes(node_vec);

    Eigen::VectorXd values = Eigen::VectorXd::Zero(mesh.node_count());
    for (const auto& b : bumps) {
        if (b.mass == 0.0)
            continue;
        double peak = 2.0 * b.mass / b.width;
        for (Eigen::Index j = 0; j < mesh.node_count(); ++j) {
            double t = mesh.node(j);
            if (t < b.lo() || t > b.hi())
                continue;
            double shape = b.side == BumpSide::left ? (t - b.lo()) / b.width
                                                    : (b.hi() - t) / b.width;
            values[j] += peak * shape;
        }
    }
    return GridFunction(std::move(mesh), std::move(values));
}

void check_disjoint(const std::vector<Bump>& bumps)
{
    for (size_t i = 0; i < bumps.size(); ++i) {
        const auto& a = bumps[i];
        if (a.mass == 0.0)
            continue;
        if (a.lo() < 0.0 || a.hi() > 1.0 || !(a.width > 0.0))
            throw std::invalid_argument("build_witness: bump does not fit inside [0,1]");
        for (size_t j = i + 1; j < bumps.size(); ++j) {
            const auto& b = bumps[j];
            if (b.mass == 0.0)
                continue;
            if (std::max(a.lo(), b.lo()) < std::min(a.hi(), b.hi()))
                throw std::invalid_argument("build_witness: bump supports overlap");
        }
    }
}

} // namespace

WitnessOperator build_witness(ProblemSign sign, double k, const TwoPointConfig& cfg, double eps)
{
    validate_config(sign, k, cfg);
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("build_witness: eps must lie in (0, 1)");

    // A config with t1 = 0 stands for the limit t1 -> 0+; realize it at an
    // eps-dependent point so the first-interval masses keep unit weight in
    // their own row while (t1/t2)^|k| still vanishes in the limit.
    const double t1e = cfg.t1 > 0.0 ? cfg.t1 : std::sqrt(eps) * cfg.t2;
    const double t2e = cfg.t2;
    if (!(t1e < t2e))
        throw std::invalid_argument("build_witness: effective deviation points collapse");

    std::vector<Bump> p1_bumps, p2_bumps;
    auto is = [](double a, double b) { return std::abs(a - b) <= kChoiceTol; };

    if (sign == ProblemSign::plus) {
        const double w1 = eps * t1e / 3.0;
        const double w2 = eps * (t2e - t1e) / 3.0;
        // First interval [0, t1]: positive mass sits at t1 when conc_plus
        // picks it up, otherwise at 0; same for the negative mass.
        Bump plus1{cfg.mass_plus_1, is(cfg.conc_plus, cfg.mass_plus_1) && cfg.mass_plus_1 > 0.0
                                        ? t1e
                                        : 0.0,
                   w1, BumpSide::left};
        if (plus1.point == 0.0)
            plus1.side = BumpSide::right;
        Bump minus1{cfg.mass_minus_1,
                    is(cfg.conc_minus, cfg.mass_minus_1) && cfg.mass_minus_1 > 0.0 ? t1e : 0.0, w1,
                    BumpSide::left};
        if (minus1.point == 0.0)
            minus1.side = BumpSide::right;
        Bump plus2{cfg.mass_plus_2, t2e, w2, BumpSide::left};
        Bump minus2{cfg.mass_minus_2, t2e, w2, BumpSide::left};

        // p1 carries the positive part on [0, t1] and the negative part on
        // (t1, t2]; p2 the complement.
        p1_bumps = {plus1, Bump{-minus2.mass, minus2.point, minus2.width, minus2.side}};
        p2_bumps = {plus2, Bump{-minus1.mass, minus1.point, minus1.width, minus1.side}};
        check_disjoint({plus1, minus2});
        check_disjoint({plus2, minus1});
    } else {
        const double kappa = std::abs(k);
        const double low = std::pow(t2e, kappa);
        const double w1 = eps * (t2e - t1e) / 3.0;
        const double w2 = eps * (1.0 - t2e) / 3.0;
        // Inner interval [t1, t2]: both masses at t1.  Outer interval
        // (t2, 1]: at t2 for choice 1, at 1 for choice t2^|k|.
        Bump plus1{cfg.mass_plus_1, t1e, w1, BumpSide::right};
        Bump minus1{cfg.mass_minus_1, t1e, w1, BumpSide::right};
        Bump plus2{cfg.mass_plus_2, is(cfg.conc_plus, 1.0) ? t2e : 1.0,
                   w2, is(cfg.conc_plus, 1.0) ? BumpSide::right : BumpSide::left};
        Bump minus2{cfg.mass_minus_2, is(cfg.conc_minus, 1.0) ? t2e : 1.0,
                    w2, is(cfg.conc_minus, 1.0) ? BumpSide::right : BumpSide::left};
        if (cfg.mass_plus_2 > 0.0 || cfg.mass_minus_2 > 0.0) {
            if (!(w2 > 0.0))
                throw std::invalid_argument("build_witness: outer bumps need t2 < 1");
        }

        p1_bumps = {plus2, Bump{-minus1.mass, minus1.point, minus1.width, minus1.side}};
        p2_bumps = {plus1, Bump{-minus2.mass, minus2.point, minus2.width, minus2.side}};
        check_disjoint({plus2, minus1});
        check_disjoint({plus1, minus2});
    }

    WitnessOperator w{RegularOperator{}, t1e, t2e, bumps_to_grid(p1_bumps),
                      bumps_to_grid(p2_bumps)};
    std::vector<PointTerm> terms;
    terms.push_back(PointTerm{w.p1, t1e});
    terms.push_back(PointTerm{w.p2, t2e});
    w.op = RegularOperator(std::move(terms), {});
    return w;
}

} // namespace singfde
