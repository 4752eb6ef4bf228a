#pragma once

#include "singfde/mesh.hpp"
#include "singfde/model.hpp"
#include "singfde/operators.hpp"

#include <utility>

namespace singfde {

/// Point of the concentrated two-point family: deviation points t1 < t2,
/// masses split between the two host intervals (mass_plus_1 + mass_plus_2
/// is the positive-part norm, same for minus), and the discrete
/// concentration choices.
///
/// For the plus case conc_plus is 0 or mass_plus_1 (mass of the first
/// interval placed at 0 or at t1) and likewise conc_minus; for the minus
/// case conc_plus and conc_minus are 1 or t2^|k| (mass of the outer
/// interval placed at t2 or at 1).
struct TwoPointConfig {
    double t1 = 0.0;
    double t2 = 1.0;
    double mass_plus_1 = 0.0;
    double mass_plus_2 = 0.0;
    double mass_minus_1 = 0.0;
    double mass_minus_2 = 0.0;
    double conc_plus = 0.0;
    double conc_minus = 0.0;

    double norm_plus() const { return mass_plus_1 + mass_plus_2; }
    double norm_minus() const { return mass_minus_1 + mass_minus_2; }
};

/// Closed-form 2x2 determinant of the concentrated family.
///
/// plus (k > 0), a = (t1/t2)^k:
///     | 1 - K+                K-              |
///     | -a K+ + M2-           a K- + 1 - M2+  |
///
/// minus (k < 0), b = (t1/t2)^|k|:
///     | 1 - M1- + b M2+ K+    M1+ - b M2- K-  |
///     | M2+ K+                1 - M2- K-      |
double delta1(ProblemSign sign, double k, const TwoPointConfig& cfg);

/// Determinant of the two-point problem with explicit coefficient pair
/// (p1, p2); entries are weighted integrals of p1, p2 up to (from) the
/// deviation points.  Approaches delta1 as the masses concentrate.
double delta_full(ProblemSign sign, double k, const GridFunction& p1, const GridFunction& p2,
                  double t1, double t2);

/// Part norms induced by an explicit pair: (int p1+ + p2+, int p1- + p2-).
std::pair<double, double> two_point_norms(const GridFunction& p1, const GridFunction& p2);

struct Delta1Minimum {
    double value = 0.0;
    TwoPointConfig argmin;
};

/// Brute-force minimum of delta1 over the whole family: triangular
/// (t1, t2) grid with resolution steps per axis, all mass splits in
/// resolution steps, and every concentration choice.
///
/// delta1 is affine in (t1/t2)^|k| with nonnegative slope for every fixed
/// choice of masses and concentrations, so the sweep over the t-grid
/// reduces exactly to its smallest value (t1 = 0); the reduction returns
/// bit-identical results to the literal quadruple loop.  Ties are broken
/// by lexicographic enumeration order for a reproducible argmin.
Delta1Minimum minimize_delta1(ProblemSign sign, double k, double t_plus, double t_minus,
                              int resolution);

/// The mass placement attaining the closed-form minimum
/// 1 - T+ - (T-)^2/4 (plus case) or 1 - T- - (T+)^2/4 (minus case).
TwoPointConfig extremal_config(ProblemSign sign, double t_plus, double t_minus, double t2 = 0.5);

/// Two point terms with narrow triangular bumps realizing a config's mass
/// placement.  part_norms of the operator reproduce the config's norms
/// exactly; delta_full of the bump pair approaches delta1 as eps -> 0.
struct WitnessOperator {
    RegularOperator op;
    /// Effective deviation points (t1 is displaced to an eps-dependent
    /// positive value when the config has it at 0).
    double t1 = 0.0;
    double t2 = 0.0;
    GridFunction p1; // coefficient of the x(t1) term
    GridFunction p2; // coefficient of the x(t2) term
};

WitnessOperator build_witness(ProblemSign sign, double k, const TwoPointConfig& cfg, double eps);

} // namespace singfde
