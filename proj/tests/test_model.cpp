#include "singfde/model.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace singfde;

namespace {

const SingularCoefficient p1 = SingularCoefficient::power_law(1.0);

} // namespace

TEST_CASE("right-endpoint model solutions")
{
    GradedMesh mesh = test::default_mesh();

    GridFunction zero = GridFunction::zero(mesh);
    GridFunction x = solve_model_minus(-1.0, p1, zero, 1.0);
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        CHECK(x.value(j) == mesh.node(j)); // exactly t at nodes

    GridFunction y = solve_model_minus(-1.0, p1, zero, 0.0);
    CHECK(sup_abs(y) == 0.0);

    // f = 1, c = 1/2: x(t) = t/2 + (t/2) t ... checked against the
    // reference quadrature of the representation at sample points.
    GridFunction one = GridFunction::constant(mesh, 1.0);
    GridFunction z = solve_model_minus(-1.0, p1, one, 0.5);
    for (double t : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95, 0.99, 1.0}) {
        double tail = test::adaptive_simpson([&](double s) { return t / s; }, t, 1.0, 1e-13);
        double expected = 0.5 * t - tail;
        CHECK(z(t) == doctest::Approx(expected).epsilon(1e-8));
    }

    CHECK_THROWS_AS(solve_model_minus(1.0, p1, zero, 0.0), std::invalid_argument);
}

TEST_CASE("initial-value model solutions")
{
    GradedMesh mesh = test::default_mesh();

    GridFunction one = GridFunction::constant(mesh, 1.0);
    auto sol = solve_model_plus(1.0, p1, one);
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        CHECK(sol.solution.value(j) == doctest::Approx(0.5 * mesh.node(j)).epsilon(1e-14));
    CHECK(sol.compatibility_value == doctest::Approx(0.5).epsilon(1e-14));

    GridFunction ident = GridFunction::sample(mesh, [](double t) { return t; });
    auto sq = solve_model_plus(2.0, p1, ident);
    for (double t : {0.25, 0.5, 1.0})
        CHECK(sq.solution(t) == doctest::Approx(t * t / 4.0).epsilon(1e-10));

    auto trivial = solve_model_plus(1.0, p1, GridFunction::zero(mesh));
    CHECK(sup_abs(trivial.solution) == 0.0);
    CHECK(trivial.compatibility_value == 0.0);

    CHECK_THROWS_AS(solve_model_plus(-1.0, p1, one), std::invalid_argument);
}

TEST_CASE("model solution bounds and general-coefficient consistency")
{
    std::mt19937 rng(23);
    GradedMesh mesh = test::default_mesh(128);
    for (int trial = 0; trial < 25; ++trial) {
        GridFunction f = test::random_grid(rng, mesh);
        auto sol = solve_model_plus(1.0, p1, f);
        GridFunction absf = f.with_values(f.values().cwiseAbs());
        for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
            CHECK(std::abs(sol.solution.value(j))
                  <= integrate(absf, 0.0, mesh.node(j)) + 1e-12);
    }

    // The generic exponential-ratio quadrature must agree with the closed
    // form on the 1/t coefficient.
    GridFunction f = test::random_grid(rng, mesh);
    auto closed = solve_model_plus(1.0, p1, f, QuadraturePolicy::closed_form);
    auto generic = solve_model_plus(1.0, p1, f, QuadraturePolicy::gauss);
    CHECK(sup_abs(closed.solution - generic.solution) <= 1e-10);

    auto closed_m = solve_model_minus(-1.0, p1, f, 0.7, QuadraturePolicy::closed_form);
    auto generic_m = solve_model_minus(-1.0, p1, f, 0.7, QuadraturePolicy::gauss);
    CHECK(sup_abs(closed_m - generic_m) <= 1e-10);
}

TEST_CASE("model solutions with a strong singularity against reference quadrature")
{
    auto p2 = SingularCoefficient::power_law(2.0);
    GradedMesh mesh = test::default_mesh();
    GridFunction one = GridFunction::constant(mesh, 1.0);
    auto sol = solve_model_plus(1.0, p2, one);
    for (double t : {0.3, 0.6, 1.0}) {
        double expected = test::adaptive_simpson(
            [&](double s) { return std::exp(-(1.0 / s - 1.0 / t)); }, 1e-12, t, 1e-13);
        CHECK(sol.solution(t) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("inverse operators of the model problems")
{
    GradedMesh mesh = test::default_mesh();
    GridFunction one = GridFunction::constant(mesh, 1.0);

    GridFunction lp = lambda_apply(ProblemSign::plus, 1.0, p1, one);
    CHECK(lp(0.5) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(lp.value(0) == 0.0);

    GridFunction lm = lambda_apply(ProblemSign::minus, -1.0, p1, one);
    for (double t : {0.25, 0.5, 1.0})
        CHECK(lm(t) == doctest::Approx(-t * std::log(1.0 / t)).epsilon(1e-12));

    CHECK(sup_abs(lambda_apply(ProblemSign::plus, 1.0, p1, GridFunction::zero(mesh))) == 0.0);
    CHECK_THROWS_AS(lambda_apply(ProblemSign::plus, -1.0, p1, one), std::invalid_argument);

    // contraction into C: sup |Lambda z| <= ||z||_L1
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        GridFunction z = test::random_grid(rng, test::default_mesh(64));
        CHECK(sup_abs(lambda_apply(ProblemSign::plus, 1.5, p1, z))
              <= integrate_abs(z) + 1e-12);
        CHECK(sup_abs(lambda_apply(ProblemSign::minus, -0.5, p1, z))
              <= integrate_abs(z) + 1e-12);
    }
}

TEST_CASE("spectral radius estimates against the dense spectrum")
{
    GradedMesh mesh = GradedMesh::graded(200, 2.0);

    auto est0 = spectral_radius_estimate(ProblemSign::plus, 1.0, p1, RegularOperator::zero(), mesh);
    CHECK(est0.value == 0.0);
    CHECK(est0.converged);

    auto dense_radius = [&](const RegularOperator& T) {
        GradedMesh work = mesh_refined_by_operator(mesh, T);
        Eigen::MatrixXd M = lambda_node_matrix(ProblemSign::plus, 1.0, p1, work)
                            * operator_node_matrix(T, work);
        Eigen::EigenSolver<Eigen::MatrixXd> eig(M, false);
        return eig.eigenvalues().cwiseAbs().maxCoeff();
    };

    GridFunction q1 = GridFunction::constant(mesh, 1.0);
    GridFunction ht = GridFunction::sample(mesh, [](double t) { return t; });
    RegularOperator identity = RegularOperator::single_point(q1, ht);
    auto est1 = spectral_radius_estimate(ProblemSign::plus, 1.0, p1, identity, mesh);
    CHECK(est1.value <= 1.0);
    CHECK(est1.value == doctest::Approx(dense_radius(identity)).epsilon(1e-3));

    GridFunction qh = GridFunction::constant(mesh, 0.5);
    GridFunction hh = GridFunction::sample(mesh, [](double t) { return 0.5 * t; });
    RegularOperator half = RegularOperator::single_point(qh, hh);
    auto est2 = spectral_radius_estimate(ProblemSign::plus, 1.0, p1, half, mesh);
    CHECK(est2.value < 0.5);
    CHECK(est2.value == doctest::Approx(dense_radius(half)).epsilon(1e-3));
}

TEST_CASE("norm bound keeps the spectral radius below one")
{
    std::mt19937 rng(41);
    GradedMesh mesh = GradedMesh::graded(96, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        GridFunction q = test::random_grid(rng, mesh);
        double norm = integrate_abs(q);
        GridFunction scaled = (0.9 / std::max(norm, 1e-9)) * q;
        std::uniform_real_distribution<double> theta(0.0, 1.0);
        RegularOperator T = RegularOperator::single_point(scaled, theta(rng));
        auto est = spectral_radius_estimate(ProblemSign::plus, 1.0, p1, T, mesh);
        CHECK(est.value < 1.0);
        auto norms = part_norms(T);
        CHECK(est.value <= norms.first + norms.second + 1e-6);
    }
}
