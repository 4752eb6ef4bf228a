#include "singfde/solver.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace singfde {

namespace {

constexpr int kMaxPicard = 10000;
constexpr double kSingularCutoff = 1e-10;

struct Discretization {
    GradedMesh mesh;
    Eigen::MatrixXd lambda;
    Eigen::MatrixXd op;
    Eigen::VectorXd g;
};

Discretization discretize(ProblemSign sign, double k, const SingularCoefficient& p,
                          const RegularOperator& T, const GridFunction& f, double c)
{
    GradedMesh work = mesh_refined_by_operator(f.mesh(), T);
    GridFunction f_work = GridFunction::sample(work, [&](double t) { return f(t); });
    Eigen::MatrixXd L = lambda_node_matrix(sign, k, p, work);
    Eigen::MatrixXd A = operator_node_matrix(T, work);
    Eigen::VectorXd g = L * f_work.values();
    if (sign == ProblemSign::minus) {
        const double top = work.right_endpoint();
        for (Eigen::Index i = 0; i < work.node_count(); ++i)
            g[i] += c * decay(p, -k, work.node(i), top);
    }
    return {std::move(work), std::move(L), std::move(A), std::move(g)};
}

double residual_l1_of(const Discretization& d, const Eigen::VectorXd& x)
{
    Eigen::VectorXd defect = d.lambda * (d.op * x) + d.g - x;
    return integrate_abs(GridFunction(d.mesh, defect));
}

// Picard iteration on x = Lambda(T x) + g.  For (anti-)Volterra operators
// the fixed point is reached on expanding subintervals: convergence is
// checked on a window of nodes that grows from the classified end, which
// keeps the iteration count bounded for operators with large norm.
struct PicardOutcome {
    Eigen::VectorXd x;
    int iterations = 0;
    bool converged = false;
};

PicardOutcome picard(const Discretization& d, double tol, VolterraClass structure)
{
    const Eigen::Index n = d.g.size();
    const double stop = tol / 10.0;
    const bool forward = structure == VolterraClass::volterra || structure == VolterraClass::both;
    const bool backward = structure == VolterraClass::anti_volterra;
    const bool windowed = forward || backward;
    const int window_count = 8;

    PicardOutcome out;
    out.x = d.g;
    int window = windowed ? 1 : window_count;
    Eigen::VectorXd next(n);
    for (int it = 1; it <= kMaxPicard; ++it) {
        next = d.lambda * (d.op * out.x) + d.g;
        Eigen::Index lo = 0, hi = n;
        if (windowed) {
            Eigen::Index chunk = (n + window_count - 1) / window_count;
            if (forward)
                hi = std::min<Eigen::Index>(n, window * chunk);
            else
                lo = std::max<Eigen::Index>(0, n - window * chunk);
        }
        double delta = (next.segment(lo, hi - lo) - out.x.segment(lo, hi - lo))
                           .cwiseAbs()
                           .maxCoeff();
        out.x = next;
        out.iterations = it;
        if (delta < stop) {
            if (!windowed || window == window_count) {
                out.converged = true;
                return out;
            }
            ++window;
        }
    }
    return out;
}

struct CollocationOutcome {
    Eigen::VectorXd x;
    double min_singular_value = 0.0;
};

CollocationOutcome collocation(const Discretization& d)
{
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(d.g.size(), d.g.size()) - d.lambda * d.op;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    CollocationOutcome out;
    out.min_singular_value = svd.singularValues().minCoeff();
    out.x = svd.solve(d.g);
    return out;
}

SolveReport run_solver(ProblemSign sign, double k, const SingularCoefficient& p,
                       const RegularOperator& T, const GridFunction& f, double c, double tol,
                       SolveMode mode)
{
    Discretization d = discretize(sign, k, p, T, f, c);
    const VolterraClass structure = classify_volterra(T);
    const bool triangular = sign == ProblemSign::plus
                                ? (structure == VolterraClass::volterra || structure == VolterraClass::both)
                                : (structure == VolterraClass::anti_volterra || structure == VolterraClass::both);

    SpaceTag tag = sign == ProblemSign::plus ? SpaceTag::d_plus(k) : SpaceTag::d_minus(k);
    SolveReport report{GridFunction::zero(d.mesh)};
    report.space = tag;

    bool try_picard = mode != SolveMode::collocation;
    if (mode == SolveMode::automatic && !triangular) {
        auto norms = part_norms(T);
        if (norms.first + norms.second > 0.999) {
            SpectralEstimate rho = spectral_radius_estimate(sign, k, p, T, f.mesh());
            try_picard = rho.converged && rho.value < 0.999;
        }
    }

    if (try_picard) {
        PicardOutcome pic = picard(d, tol, triangular ? structure : VolterraClass::neither);
        if (pic.converged) {
            report.solution = GridFunction(d.mesh, pic.x);
            report.iterations = pic.iterations;
            report.residual_l1 = residual_l1_of(d, pic.x);
            report.converged = report.residual_l1 <= tol;
            return report;
        }
        if (mode == SolveMode::picard) {
            report.solution = GridFunction(d.mesh, pic.x);
            report.iterations = pic.iterations;
            report.residual_l1 = residual_l1_of(d, pic.x);
            report.converged = false;
            report.diagnostic = "picard iteration cap exceeded";
            return report;
        }
    }

    CollocationOutcome col = collocation(d);
    report.solution = GridFunction(d.mesh, col.x);
    report.used_collocation = true;
    report.min_singular_value = col.min_singular_value;
    report.residual_l1 = residual_l1_of(d, col.x);
    if (col.min_singular_value < kSingularCutoff) {
        report.converged = false;
        report.diagnostic =
            "collocation matrix numerically singular; the homogeneous problem may have a "
            "nontrivial kernel";
    } else {
        report.converged = report.residual_l1 <= tol;
    }
    return report;
}

} // namespace

SolveReport solve_cauchy_plus(double k, const SingularCoefficient& p, const RegularOperator& T,
                              const GridFunction& f, double tol, SolveMode mode)
{
    if (!(k > 0.0))
        throw std::invalid_argument("solve_cauchy_plus: requires k > 0");
    return run_solver(ProblemSign::plus, k, p, T, f, 0.0, tol, mode);
}

SolveReport solve_bvp_minus(double k, const SingularCoefficient& p, const RegularOperator& T,
                            const GridFunction& f, double c, double tol, SolveMode mode)
{
    if (!(k < 0.0))
        throw std::invalid_argument("solve_bvp_minus: requires k < 0");
    return run_solver(ProblemSign::minus, k, p, T, f, c, tol, mode);
}

CollocationDiagnostic collocation_diagnostic(ProblemSign sign, double k,
                                             const SingularCoefficient& p,
                                             const RegularOperator& T, const GradedMesh& mesh)
{
    GradedMesh work = mesh_refined_by_operator(mesh, T);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(work.node_count(), work.node_count())
                        - lambda_node_matrix(sign, k, p, work) * operator_node_matrix(T, work);

    CollocationDiagnostic diag;
    diag.matrix_dim = B.rows();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(B);
    diag.min_singular_value = svd.singularValues().minCoeff();

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    int sign_det = lu.permutationP().determinant() > 0 ? 1 : -1;
    const auto& U = lu.matrixLU();
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        double u = U(i, i);
        if (u == 0.0) {
            sign_det = 0;
            break;
        }
        if (u < 0.0)
            sign_det = -sign_det;
    }
    diag.determinant_sign = sign_det;
    return diag;
}

} // namespace singfde
