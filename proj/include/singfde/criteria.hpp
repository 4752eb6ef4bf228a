#pragma once

#include "singfde/extended.hpp"

#include <utility>
#include <vector>

namespace singfde {

/// Verdict of a sharp solvability criterion over the norm pair
/// (||T+||, ||T-||).
struct CriterionVerdict {
    bool solvable_for_all = false;
    bool boundary = false;
    /// Signed slack to the frontier, measured in the second-coordinate
    /// direction at fixed first coordinate (or in the first coordinate when
    /// the first inequality already fails).
    double margin = 0.0;
};

/// k > 0 case: solvable for every operator with the given part norms iff
/// t_plus <= 1 and t_minus <= 2 sqrt(1 - t_plus), both non-strict.
CriterionVerdict solvable_plus(double t_plus, double t_minus);

/// k < 0 case: the mirror image, t_minus <= 1 and t_plus <= 2 sqrt(1 - t_minus).
CriterionVerdict solvable_minus(double t_plus, double t_minus);

/// Non-singular comparison case: t_plus < 1 and t_minus < 1 + 2 sqrt(1 - t_plus),
/// both strict, so frontier points are not solvable.
CriterionVerdict solvable_nonsingular(double t_plus, double t_minus);

/// Weighted-gain criterion: solvable iff gain < |k| strictly; a divergent
/// gain is never solvable.
CriterionVerdict solvable_weighted(const ExtendedReal& gain, double k);

enum class CriterionCase { plus, minus, nonsingular };

/// Parametric samples of the frontier curve, monotone in the parameter.
std::vector<std::pair<double, double>> region_boundary(CriterionCase which, int samples);

} // namespace singfde
