#include "singfde/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace singfde {

namespace {

void require_nonnegative(double a, double b)
{
    if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("criteria: part norms must be nonnegative");
}

} // namespace

CriterionVerdict solvable_plus(double t_plus, double t_minus)
{
    require_nonnegative(t_plus, t_minus);
    CriterionVerdict v;
    if (t_plus > 1.0) {
        v.margin = 1.0 - t_plus;
        return v;
    }
    v.margin = 2.0 * std::sqrt(1.0 - t_plus) - t_minus;
    v.solvable_for_all = v.margin >= 0.0;
    v.boundary = v.margin == 0.0;
    return v;
}

CriterionVerdict solvable_minus(double t_plus, double t_minus)
{
    return solvable_plus(t_minus, t_plus);
}

CriterionVerdict solvable_nonsingular(double t_plus, double t_minus)
{
    require_nonnegative(t_plus, t_minus);
    CriterionVerdict v;
    if (t_plus >= 1.0) {
        v.margin = 1.0 - t_plus;
        v.boundary = v.margin == 0.0;
        return v;
    }
    v.margin = 1.0 + 2.0 * std::sqrt(1.0 - t_plus) - t_minus;
    v.solvable_for_all = v.margin > 0.0;
    v.boundary = v.margin == 0.0;
    return v;
}

CriterionVerdict solvable_weighted(const ExtendedReal& gain, double k)
{
    if (k == 0.0)
        throw std::invalid_argument("solvable_weighted: k must be nonzero");
    CriterionVerdict v;
    if (!gain.is_finite()) {
        v.margin = -std::numeric_limits<double>::infinity();
        return v;
    }
    if (gain.value() < 0.0)
        throw std::invalid_argument("solvable_weighted: gain must be nonnegative");
    v.margin = std::abs(k) - gain.value();
    v.solvable_for_all = v.margin > 0.0;
    v.boundary = v.margin == 0.0;
    return v;
}

std::vector<std::pair<double, double>> region_boundary(CriterionCase which, int samples)
{
    if (samples < 2)
        throw std::invalid_argument("region_boundary: need at least 2 samples");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        double tau = static_cast<double>(i) / (samples - 1);
        double arc = 2.0 * std::sqrt(1.0 - tau);
        switch (which) {
        case CriterionCase::plus:
            pts.emplace_back(tau, arc);
            break;
        case CriterionCase::minus:
            pts.emplace_back(arc, tau);
            break;
        case CriterionCase::nonsingular:
            pts.emplace_back(tau, 1.0 + arc);
            break;
        }
    }
    return pts;
}

} // namespace singfde
