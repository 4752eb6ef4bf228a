#include "singfde/weighted.hpp"

#include "singfde/detail/gauss.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace singfde {

namespace {

constexpr int kMaxPicard = 10000;

// Kernel matrices of the weighted integral operators
//   plus:  (Az)(t) =  int_0^t exp(-k int_s^t p) p(s) [nu(s)] z(s) ds
//   minus: (Az)(t) = -int_t^a exp(-|k| int_t^s p) p(s) [nu(s)] z(s) ds
// assembled segment-by-segment with cached Gauss data; the exponent is
// always formed as a single difference of primitives so no large
// intermediate exponential is ever materialized.
struct SegmentCache {
    std::array<double, 16> s;
    std::array<double, 16> w;   // gauss weight * half-length
    std::array<double, 16> pnu; // p(s) * (nu(s) or 1)
    std::array<double, 16> q;   // int_s^top p
};

std::vector<SegmentCache> cache_segments(const GradedMesh& mesh, const SingularCoefficient& p,
                                         const WeightFunction* nu)
{
    const auto& rule = detail::gauss16();
    const double top = mesh.right_endpoint();
    std::vector<SegmentCache> cache(mesh.segment_count());
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        double a = mesh.node(j), b = mesh.node(j + 1);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int g = 0; g < 16; ++g) {
            double s = mid + half * rule.nodes[g];
            cache[j].s[g] = s;
            cache[j].w[g] = half * rule.weights[g];
            cache[j].pnu[g] = p(s) * (nu ? (*nu)(s) : 1.0);
            cache[j].q[g] = p.primitive_unsafe(s, top);
        }
    }
    return cache;
}

Eigen::MatrixXd weighted_kernel_matrix(ProblemSign sign, double k, const SingularCoefficient& p,
                                       const WeightFunction* nu, const GradedMesh& mesh)
{
    const double kappa = std::abs(k);
    const double top = mesh.right_endpoint();
    const Eigen::Index n = mesh.node_count();
    auto cache = cache_segments(mesh, p, nu);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        const auto& seg = cache[j];
        const double s0 = mesh.node(j), s1 = mesh.node(j + 1), h = s1 - s0;
        const Eigen::Index row_lo = sign == ProblemSign::plus ? j + 1 : 0;
        const Eigen::Index row_hi = sign == ProblemSign::plus ? n : j + 1;
        for (Eigen::Index i = row_lo; i < row_hi; ++i) {
            double t = mesh.node(i);
            if (sign == ProblemSign::minus && t == 0.0)
                continue; // kernel weight vanishes at the singular endpoint
            double qt = p.primitive_unsafe(t, top);
            double m0 = 0.0, m1 = 0.0;
            for (int g = 0; g < 16; ++g) {
                double expo = sign == ProblemSign::plus ? -kappa * (seg.q[g] - qt)
                                                        : -kappa * (qt - seg.q[g]);
                double w = std::exp(expo) * seg.pnu[g] * seg.w[g];
                m0 += w;
                m1 += w * seg.s[g];
            }
            double w_lo = (s1 * m0 - m1) / h;
            double w_hi = (m1 - s0 * m0) / h;
            if (sign == ProblemSign::minus) {
                w_lo = -w_lo;
                w_hi = -w_hi;
            }
            A(i, j) += w_lo;
            A(i, j + 1) += w_hi;
        }
    }
    return A;
}

double weighted_sup(const Eigen::VectorXd& v, const GradedMesh& mesh, const WeightFunction& nu)
{
    double best = 0.0;
    for (Eigen::Index i = 1; i < mesh.node_count(); ++i)
        best = std::max(best, std::abs(v[i]) / nu(mesh.node(i)));
    return best;
}

// K_alpha(t) by direct quadrature over [t, alpha].
double kalpha_at(const SingularCoefficient& p, const WeightFunction& nu, double kappa, double t,
                 const GradedMesh& mesh)
{
    const double top = mesh.right_endpoint();
    double total = 0.0;
    for (Eigen::Index j = 0; j < mesh.segment_count(); ++j) {
        double lo = std::max(mesh.node(j), t);
        double hi = mesh.node(j + 1);
        if (lo >= hi)
            continue;
        total += detail::gauss_segment(
            [&](double s) { return decay(p, kappa, t, s) * p(s) * nu(s); }, lo, hi);
    }
    (void)top;
    return total;
}

double golden_max(const std::function<double(double)>& fn, double lo, double hi)
{
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < 60 && b - a > 1e-12 * hi; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = fn(x1);
        }
    }
    return std::max(f1, f2);
}

GradedMesh weighted_mesh(const GridFunction& f, const RegularOperator& T, double alpha)
{
    GradedMesh base = GradedMesh::graded(512, 2.0).scaled(alpha);
    GradedMesh merged = mesh_refined_by_operator(base, T);
    if (merged.right_endpoint() <= alpha)
        return merged;
    // Drop the refinement nodes beyond alpha (minus problems live on [0, alpha]).
    std::vector<double> nodes;
    for (Eigen::Index j = 0; j < merged.node_count(); ++j)
        if (merged.node(j) < alpha)
            nodes.push_back(merged.node(j));
    nodes.push_back(alpha);
    (void)f;
    return GradedMesh::with_nodes(
        Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size())));
}

struct WeightedPicard {
    Eigen::VectorXd x;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

WeightedPicard weighted_picard(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::VectorXd& rhs, const GradedMesh& mesh,
                               const WeightFunction& nu, double tol, bool windowed_forward)
{
    const double stop = tol / 10.0;
    const int window_count = windowed_forward ? 8 : 1;
    WeightedPicard out;
    out.x = rhs;
    int window = 1;
    const Eigen::Index n = rhs.size();
    for (int it = 1; it <= kMaxPicard; ++it) {
        Eigen::VectorXd next = A * (B * out.x) + rhs;
        Eigen::Index chunk = (n + window_count - 1) / window_count;
        Eigen::Index hi = windowed_forward ? std::min<Eigen::Index>(n, window * chunk) : n;
        double delta = 0.0;
        for (Eigen::Index i = 1; i < hi; ++i)
            delta = std::max(delta, std::abs(next[i] - out.x[i]) / nu(mesh.node(i)));
        out.x = next;
        out.iterations = it;
        if (delta < stop) {
            if (window == window_count) {
                out.converged = true;
                break;
            }
            ++window;
        }
    }
    Eigen::VectorXd defect = A * (B * out.x) + rhs - out.x;
    out.residual = weighted_sup(defect, mesh, nu);
    return out;
}

} // namespace

AlphaReport k_alpha_profile(const SingularCoefficient& p, const WeightFunction& nu, double k,
                            double alpha, double eps0)
{
    if (!(k < 0.0))
        throw std::invalid_argument("k_alpha_profile: requires k < 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("k_alpha_profile: alpha must lie in (0, 1]");

    const double kappa = -k;
    GradedMesh mesh = GradedMesh::graded(256, 2.0).scaled(alpha);

    AlphaReport report;
    report.alpha = alpha;

    Eigen::Index best_value_node = 1, best_ratio_node = 1;
    double best_value = 0.0, best_ratio = 0.0;
    for (Eigen::Index i = 1; i < mesh.node_count(); ++i) {
        double t = mesh.node(i);
        double value = kalpha_at(p, nu, kappa, t, mesh);
        double ratio = value / nu(t);
        if (value > best_value) {
            best_value = value;
            best_value_node = i;
        }
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_ratio_node = i;
        }
    }

    auto bracket = [&](Eigen::Index i) {
        double lo = mesh.node(std::max<Eigen::Index>(1, i - 1));
        double hi = mesh.node(std::min<Eigen::Index>(mesh.node_count() - 1, i + 1));
        return std::pair<double, double>{lo, hi};
    };
    auto [vlo, vhi] = bracket(best_value_node);
    report.max_k_alpha = std::max(
        best_value,
        golden_max([&](double t) { return kalpha_at(p, nu, kappa, t, mesh); }, vlo, vhi));
    auto [rlo, rhi] = bracket(best_ratio_node);
    best_ratio = std::max(
        best_ratio,
        golden_max([&](double t) { return kalpha_at(p, nu, kappa, t, mesh) / nu(t); }, rlo, rhi));

    report.contraction_factor = kappa * best_ratio / (1.0 + eps0);
    report.admissible = report.contraction_factor <= 1.0;
    return report;
}

bool nu_condition_check(const SingularCoefficient& p, const WeightFunction& nu)
{
    if (!nu.differentiable())
        throw std::invalid_argument("nu_condition_check: weight is not differentiable");
    double samples[4];
    double t = 1e-2;
    for (int i = 0; i < 4; ++i, t *= 1e-1)
        samples[i] = nu.derivative(t) / (p(t) * nu(t));
    for (int i = 1; i < 4; ++i)
        if (!(samples[i] < samples[i - 1]))
            return false;
    return samples[3] <= 1e-2 || samples[3] <= 0.5 * samples[0];
}

SolveReport solve_weighted_plus(const WeightedProblem& prob, double tol)
{
    if (!(prob.k > 0.0))
        throw std::invalid_argument("solve_weighted_plus: requires k > 0");

    const bool volterra = is_volterra(prob.T);
    SolveReport report{GridFunction::zero(prob.f.mesh())};
    report.space = SpaceTag{SpaceTag::Kind::weighted_linf, prob.k};

    bool ok = false;
    std::ostringstream why;
    if (prob.nu_on_operator) {
        double sup_norm = sup_unit_norm(prob.T);
        ok = volterra || sup_norm <= 1.0 / (prob.nu(1.0) * prob.k);
        if (!ok)
            why << "operator is not Volterra and sup norm " << sup_norm << " exceeds 1/(nu(1) k) = "
                << 1.0 / (prob.nu(1.0) * prob.k);
    } else {
        ExtendedReal gain = weighted_gain(prob.T, prob.nu);
        CriterionVerdict verdict = solvable_weighted(gain, prob.k);
        ok = verdict.solvable_for_all;
        if (!ok)
            why << "weighted gain " << (gain.is_finite() ? gain.value() : -1.0)
                << " must be strictly below k = " << prob.k << " (divergent gain counts as above)";
    }
    if (!ok) {
        report.refused = true;
        report.diagnostic = why.str();
        return report;
    }

    GradedMesh mesh = weighted_mesh(prob.f, prob.T, prob.f.mesh().right_endpoint());
    Eigen::MatrixXd A = weighted_kernel_matrix(ProblemSign::plus, prob.k, prob.p,
                                               prob.nu_on_operator ? &prob.nu : nullptr, mesh);
    Eigen::MatrixXd B = operator_node_matrix(prob.T, mesh);
    Eigen::VectorXd f_vals(mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        f_vals[i] = prob.f(mesh.node(i)) * (prob.nu_on_operator ? 1.0 : prob.nu(mesh.node(i)));
    Eigen::VectorXd rhs = A * f_vals;

    WeightedPicard pic = weighted_picard(A, B, rhs, mesh, prob.nu, tol, volterra);
    report.solution = GridFunction(mesh, pic.x);
    report.iterations = pic.iterations;
    report.residual_l1 = pic.residual;
    report.converged = pic.converged && pic.residual <= tol;
    if (!pic.converged)
        report.diagnostic = "weighted Picard iteration did not converge";
    return report;
}

SolveReport solve_weighted_minus(const WeightedProblem& prob, double alpha, double tol)
{
    if (!(prob.k < 0.0))
        throw std::invalid_argument("solve_weighted_minus: requires k < 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("solve_weighted_minus: alpha must lie in (0, 1]");

    const double kappa = -prob.k;
    SolveReport report{GridFunction::zero(prob.f.mesh())};
    report.space = SpaceTag{SpaceTag::Kind::weighted_linf, prob.k};

    double sup_norm = sup_unit_norm(prob.T);
    bool norm_ok = prob.nu(alpha) * sup_norm / kappa <= 1.0;
    bool profile_ok = false;
    if (!norm_ok)
        profile_ok = k_alpha_profile(prob.p, prob.nu, prob.k, alpha).admissible;

    std::ostringstream why;
    if (!norm_ok && !profile_ok) {
        WeightedProblem scan = prob;
        why << "alpha = " << alpha << " is not admissible; largest admissible alpha ~ "
            << largest_admissible_alpha(scan);
        report.refused = true;
        report.diagnostic = why.str();
        return report;
    }
    if (!prob.nu_on_operator) {
        ExtendedReal gain = weighted_gain(prob.T, prob.nu);
        CriterionVerdict verdict = solvable_weighted(gain, prob.k);
        if (!verdict.solvable_for_all) {
            report.refused = true;
            why << "weighted gain " << (gain.is_finite() ? gain.value() : -1.0)
                << " must be strictly below |k| = " << kappa;
            report.diagnostic = why.str();
            return report;
        }
    }

    GradedMesh mesh = weighted_mesh(prob.f, prob.T, alpha);
    Eigen::MatrixXd A = weighted_kernel_matrix(ProblemSign::minus, prob.k, prob.p,
                                               prob.nu_on_operator ? &prob.nu : nullptr, mesh);
    Eigen::MatrixXd B = operator_node_matrix(prob.T, mesh);
    Eigen::VectorXd rhs(mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
        double t = mesh.node(i);
        rhs[i] = prob.c * decay(prob.p, kappa, t, alpha);
    }
    Eigen::VectorXd f_vals(mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        f_vals[i] = prob.f(mesh.node(i)) * (prob.nu_on_operator ? 1.0 : prob.nu(mesh.node(i)));
    rhs += A * f_vals;

    WeightedPicard pic = weighted_picard(A, B, rhs, mesh, prob.nu, tol, false);
    report.solution = GridFunction(mesh, pic.x);
    report.iterations = pic.iterations;
    report.residual_l1 = pic.residual;
    report.converged = pic.converged && pic.residual <= tol;
    if (!pic.converged)
        report.diagnostic = "weighted Picard iteration did not converge";
    return report;
}

double largest_admissible_alpha(const WeightedProblem& prob, double eps0)
{
    const double kappa = std::abs(prob.k);
    double sup_norm = sup_unit_norm(prob.T);
    double alpha = 1.0;
    for (int i = 0; i < 40; ++i, alpha /= 1.5) {
        if (prob.nu(alpha) * sup_norm / kappa <= 1.0)
            return alpha;
        if (prob.k < 0.0 && k_alpha_profile(prob.p, prob.nu, prob.k, alpha, eps0).admissible)
            return alpha;
    }
    return 0.0;
}

GridFunction weighted_kernel_apply(double k, const SingularCoefficient& p,
                                   const WeightFunction* nu, const GridFunction& z)
{
    if (k == 0.0)
        throw std::invalid_argument("weighted_kernel_apply: k must be nonzero");
    const ProblemSign sign = k > 0.0 ? ProblemSign::plus : ProblemSign::minus;
    Eigen::MatrixXd A = weighted_kernel_matrix(sign, k, p, nu, z.mesh());
    return z.with_values(A * z.values());
}

EssentialityReport essentiality_demo(double k, const SingularCoefficient& p,
                                     const WeightFunction& nu, const GridFunction& f)
{
    if (!(k > 0.0))
        throw std::invalid_argument("essentiality_demo: requires k > 0");

    EssentialityReport report;
    if (pnu_integrable_numeric(p, nu)) {
        report.applicable = false;
        report.note = "p * nu is integrable; the demonstration does not apply";
        return report;
    }
    report.applicable = true;

    // T = k * Id sits exactly on the boundary of the strict gain criterion;
    // the equation collapses to x' = p nu f.
    GradedMesh mesh = GradedMesh::graded(512, 2.0);
    Eigen::MatrixXd A = weighted_kernel_matrix(ProblemSign::plus, k, p, nullptr, mesh);
    Eigen::VectorXd nuf(mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        nuf[i] = nu(mesh.node(i)) * f(mesh.node(i));
    Eigen::VectorXd rhs = A * nuf;

    const int iterations = 200;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(mesh.node_count());
    double prev_norm = 0.0;
    bool nondecreasing = true;
    double last_delta = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXd next = k * (A * x) + rhs;
        double norm = weighted_sup(next, mesh, nu);
        nondecreasing = nondecreasing && norm >= prev_norm - 1e-12 * std::max(1.0, prev_norm);
        last_delta = weighted_sup(next - x, mesh, nu);
        if (it == 0)
            report.first_weighted_norm = norm;
        prev_norm = norm;
        x = next;
    }
    report.last_weighted_norm = prev_norm;
    report.iterations = iterations;
    const bool settled = last_delta < 1e-10 * std::max(1.0, prev_norm);
    report.non_convergence_flagged = nondecreasing && !settled;
    report.note = "iterate weighted norms non-decreasing; the limit equation x' = p nu f has no "
                  "admissible solution";
    return report;
}

} // namespace singfde
