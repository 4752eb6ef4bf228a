#pragma once

#include "singfde/model.hpp"
#include "singfde/operators.hpp"
#include "singfde/spaces.hpp"

#include <limits>
#include <string>

namespace singfde {

enum class SolveMode { automatic, picard, collocation };

struct SolveReport {
    GridFunction solution;
    /// L1 defect of the integrated-form equation x = Lambda T x + g on the
    /// working mesh (the weighted sup defect for the weighted solvers).
    double residual_l1 = 0.0;
    int iterations = 0;
    bool used_collocation = false;
    double min_singular_value = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    /// Set when a solvability precondition refused the solve outright.
    bool refused = false;
    std::string diagnostic;
    SpaceTag space;
};

/// x' = -k p x + (Tx) + f with x(0) = 0, k > 0, through the fixed point
/// x = Lambda+ T x + Lambda+ f.
///
/// Volterra operators always go through Picard on expanding subintervals
/// (unique solvability holds for any norm); otherwise Picard runs when the
/// spectral radius estimate is < 1 and node collocation of the integral
/// form is the fallback.
SolveReport solve_cauchy_plus(double k, const SingularCoefficient& p, const RegularOperator& T,
                              const GridFunction& f, double tol,
                              SolveMode mode = SolveMode::automatic);

/// x' = -k p x + (Tx) + f with x(1) = c, k < 0, through
/// x = Lambda- T x + g, g = c x1 + Lambda- f.
SolveReport solve_bvp_minus(double k, const SingularCoefficient& p, const RegularOperator& T,
                            const GridFunction& f, double c, double tol,
                            SolveMode mode = SolveMode::automatic);

struct CollocationDiagnostic {
    Eigen::Index matrix_dim = 0;
    double min_singular_value = 0.0;
    int determinant_sign = 0;
};

/// Conditioning data of the dense discretization of I - Lambda T; the
/// smallest singular value trending to 0 signals approach to
/// non-solvability (the homogeneous problem acquiring a kernel).
CollocationDiagnostic collocation_diagnostic(ProblemSign sign, double k,
                                             const SingularCoefficient& p,
                                             const RegularOperator& T, const GradedMesh& mesh);

} // namespace singfde
