#include "singfde/model.hpp"

#include "singfde/detail/gauss.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace singfde {

namespace {

void require_sign(ProblemSign sign, double k)
{
    if (sign == ProblemSign::plus && !(k > 0.0))
        throw std::invalid_argument("model: plus problems require k > 0");
    if (sign == ProblemSign::minus && !(k < 0.0))
        throw std::invalid_argument("model: minus problems require k < 0");
}

bool use_closed_form(const SingularCoefficient& p, QuadraturePolicy policy)
{
    if (policy == QuadraturePolicy::closed_form)
        return true;
    if (policy == QuadraturePolicy::gauss)
        return false;
    return p.kind() == SingularCoefficient::Kind::power_law && p.exponent() == 1.0;
}

// Moments int w ds and int w s ds over [s0, s1] for the Lambda kernels.
struct Moments {
    double m0;
    double m1;
};

Moments lambda_moments(ProblemSign sign, double kappa, const SingularCoefficient& p, double anchor,
                       double s0, double s1, bool closed)
{
    if (closed) {
        if (sign == ProblemSign::plus)
            return {detail::power_moment_left(kappa, anchor, s0, s1, 0),
                    detail::power_moment_left(kappa, anchor, s0, s1, 1)};
        return {detail::power_moment_right(kappa, anchor, s0, s1, 0),
                detail::power_moment_right(kappa, anchor, s0, s1, 1)};
    }
    auto weight = [&](double s) {
        return sign == ProblemSign::plus ? decay(p, kappa, s, anchor) : decay(p, kappa, anchor, s);
    };
    return {detail::gauss_segment(weight, s0, s1),
            detail::gauss_segment([&](double s) { return weight(s) * s; }, s0, s1)};
}

} // namespace

namespace {

// int over one segment of s^m * (c0 + c1 s), m real; the m = -1 cases carry
// logarithms.
double monomial_weighted_segment(double m, double s0, double s1, double c0, double c1)
{
    auto base = [&](double mm) {
        if (mm == -1.0)
            return std::log(s1 / s0);
        return (std::pow(s1, mm + 1.0) - std::pow(s0, mm + 1.0)) / (mm + 1.0);
    };
    return c0 * base(m) + c1 * base(m + 1.0);
}

} // namespace

GridFunction solve_model_minus(double k, const SingularCoefficient& p, const GridFunction& f,
                               double c, QuadraturePolicy policy)
{
    if (!(k < 0.0))
        throw std::invalid_argument("solve_model_minus: requires k < 0");
    const double kappa = -k;
    const auto& mesh = f.mesh();
    const double top = mesh.right_endpoint();
    Eigen::VectorXd x(mesh.node_count());
    x[0] = 0.0;

    if (use_closed_form(p, policy)) {
        // x(t) = t^kappa (c b^(-kappa) - int_t^b s^(-kappa) f(s) ds), b the
        // right endpoint, suffix-accumulated.
        const double scaled_c = c * std::pow(top, -kappa);
        double suffix = 0.0;
        x[mesh.node_count() - 1] = c;
        for (Eigen::Index i = mesh.node_count() - 2; i >= 1; --i) {
            double s0 = mesh.node(i), s1 = mesh.node(i + 1);
            double c1 = (f.value(i + 1) - f.value(i)) / (s1 - s0);
            double c0 = f.value(i) - c1 * s0;
            suffix += monomial_weighted_segment(-kappa, s0, s1, c0, c1);
            x[i] = std::pow(mesh.node(i), kappa) * (scaled_c - suffix);
        }
        return f.with_values(std::move(x));
    }

    for (Eigen::Index i = 1; i < mesh.node_count(); ++i) {
        double t = mesh.node(i);
        double tail = integrate_ratio_weighted(f, p, k, t, top, t, policy);
        x[i] = c * decay(p, kappa, t, top) - tail;
    }
    return f.with_values(std::move(x));
}

ModelPlusSolution solve_model_plus(double k, const SingularCoefficient& p, const GridFunction& f,
                                   QuadraturePolicy policy)
{
    if (!(k > 0.0))
        throw std::invalid_argument("solve_model_plus: requires k > 0");
    const auto& mesh = f.mesh();
    Eigen::VectorXd x(mesh.node_count());
    x[0] = 0.0;

    if (use_closed_form(p, policy)) {
        // x(t) = t^(-k) int_0^t s^k f(s) ds, prefix-accumulated.
        double prefix = 0.0;
        for (Eigen::Index i = 1; i < mesh.node_count(); ++i) {
            double s0 = mesh.node(i - 1), s1 = mesh.node(i);
            double c1 = (f.value(i) - f.value(i - 1)) / (s1 - s0);
            double c0 = f.value(i - 1) - c1 * s0;
            prefix += monomial_weighted_segment(k, s0, s1, c0, c1);
            x[i] = prefix * std::pow(s1, -k);
        }
    } else {
        for (Eigen::Index i = 1; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            x[i] = integrate_ratio_weighted(f, p, k, 0.0, t, t, policy);
        }
    }
    ModelPlusSolution out{f.with_values(std::move(x)), 0.0};
    out.compatibility_value = out.solution.value(mesh.node_count() - 1);
    return out;
}

GridFunction lambda_apply(ProblemSign sign, double k, const SingularCoefficient& p,
                          const GridFunction& z, QuadraturePolicy policy)
{
    require_sign(sign, k);
    if (sign == ProblemSign::plus)
        return solve_model_plus(k, p, z, policy).solution;
    return solve_model_minus(k, p, z, 0.0, policy);
}

Eigen::MatrixXd lambda_node_matrix(ProblemSign sign, double k, const SingularCoefficient& p,
                                   const GradedMesh& mesh, QuadraturePolicy policy)
{
    require_sign(sign, k);
    const double kappa = std::abs(k);
    const bool closed = use_closed_form(p, policy);
    const Eigen::Index n = mesh.node_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);

    for (Eigen::Index i = 0; i < n; ++i) {
        double t = mesh.node(i);
        if (sign == ProblemSign::plus) {
            if (i == 0)
                continue; // (Lambda+ z)(0) = 0
            for (Eigen::Index j = 0; j < i; ++j) {
                double s0 = mesh.node(j), s1 = mesh.node(j + 1), h = s1 - s0;
                Moments m = lambda_moments(sign, kappa, p, t, s0, s1, closed);
                L(i, j) += (s1 * m.m0 - m.m1) / h;
                L(i, j + 1) += (m.m1 - s0 * m.m0) / h;
            }
        } else {
            if (t == 0.0)
                continue; // weight vanishes at the singular endpoint
            for (Eigen::Index j = i; j < n - 1; ++j) {
                double s0 = std::max(mesh.node(j), t), s1 = mesh.node(j + 1);
                if (s0 >= s1)
                    continue;
                double h = mesh.node(j + 1) - mesh.node(j);
                Moments m = lambda_moments(sign, kappa, p, t, s0, s1, closed);
                L(i, j) -= (mesh.node(j + 1) * m.m0 - m.m1) / h;
                L(i, j + 1) -= (m.m1 - mesh.node(j) * m.m0) / h;
            }
        }
    }
    return L;
}

SpectralEstimate spectral_radius_estimate(ProblemSign sign, double k, const SingularCoefficient& p,
                                          const RegularOperator& T, const GradedMesh& mesh)
{
    require_sign(sign, k);
    GradedMesh work = mesh_refined_by_operator(mesh, T);
    Eigen::MatrixXd M =
        lambda_node_matrix(sign, k, p, work) * operator_node_matrix(T, work);

    SpectralEstimate est;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(M.rows());
    double lambda_prev = 0.0;
    for (int it = 1; it <= 500; ++it) {
        Eigen::VectorXd w = M * v;
        double lambda = w.norm() / v.norm();
        est.iterations = it;
        if (lambda == 0.0) {
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        if (it > 1 && std::abs(lambda - lambda_prev) < 1e-10 * std::max(lambda, 1e-30)) {
            est.value = lambda;
            est.converged = true;
            return est;
        }
        lambda_prev = lambda;
        v = w / w.norm();
    }

    // Oscillating iterates (complex or clustered leading spectrum): take the
    // dense spectrum while the matrix is small enough.
    if (M.rows() <= 1500) {
        Eigen::EigenSolver<Eigen::MatrixXd> eig(M, /*computeEigenvectors=*/false);
        est.value = eig.eigenvalues().cwiseAbs().maxCoeff();
        est.converged = true;
        return est;
    }

    auto norms = part_norms(T);
    est.value = norms.first + norms.second; // ||Lambda|| <= 1, so rho <= ||T||
    est.converged = false;
    est.from_norm_bound = true;
    return est;
}

} // namespace singfde
