#include "singfde/quadrature.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace singfde;

TEST_CASE("graded mesh node placement")
{
    GradedMesh uniform = GradedMesh::graded(2, 1.0);
    CHECK(uniform.node_count() == 3);
    CHECK(uniform.node(0) == 0.0);
    CHECK(uniform.node(1) == 0.5);
    CHECK(uniform.node(2) == 1.0);

    GradedMesh graded = GradedMesh::graded(4, 2.0);
    CHECK(graded.node(0) == 0.0);
    CHECK(graded.node(1) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(graded.node(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(graded.node(3) == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(graded.node(4) == 1.0);

    CHECK_THROWS_AS(GradedMesh::graded(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GradedMesh::graded(2, 0.5), std::invalid_argument);
}

TEST_CASE("grid function interpolation is exact at nodes")
{
    GradedMesh mesh = GradedMesh::graded(8, 2.0);
    GridFunction f = GridFunction::sample(mesh, [](double t) { return 3.0 * t - 1.0; });
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        CHECK(f(mesh.node(j)) == f.value(j));
    CHECK(f(0.3) == doctest::Approx(3.0 * 0.3 - 1.0).epsilon(1e-15));
}

TEST_CASE("power-weighted integral against analytic values")
{
    GradedMesh mesh = test::default_mesh(256);
    GridFunction one = GridFunction::constant(mesh, 1.0);
    CHECK(integrate_power_weighted(one, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));

    GridFunction zero = GridFunction::zero(mesh);
    CHECK(integrate_power_weighted(zero, 0.3, 0.7) == 0.0);
    CHECK(integrate_power_weighted(one, 2.0, 0.0) == 0.0);

    GridFunction ident = GridFunction::sample(mesh, [](double t) { return t; });
    CHECK(integrate_power_weighted(ident, 2.0, 0.5) == doctest::Approx(0.0625).epsilon(1e-13));

    CHECK_THROWS_AS(integrate_power_weighted(one, -1.0, 0.5), std::invalid_argument);
}

TEST_CASE("ratio-weighted integral: power-law route and reference quadrature")
{
    GradedMesh mesh = test::default_mesh(256);
    GridFunction one = GridFunction::constant(mesh, 1.0);
    auto p1 = SingularCoefficient::power_law(1.0);

    // p = 1/t reduces to the pure power weight
    double v = integrate_ratio_weighted(one, p1, 1.0, 0.0, 0.8, 0.8);
    CHECK(v == doctest::Approx(0.4).epsilon(1e-13));

    GridFunction zero = GridFunction::zero(mesh);
    CHECK(integrate_ratio_weighted(zero, p1, 1.0, 0.0, 1.0, 1.0) == 0.0);

    auto p2 = SingularCoefficient::power_law(2.0);
    double lib = integrate_ratio_weighted(one, p2, 1.0, 0.5, 1.0, 1.0);
    double ref = test::adaptive_simpson(
        [](double s) { return std::exp(-(1.0 / s - 1.0)); }, 0.5, 1.0, 1e-13);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-10));

    CHECK_THROWS_AS(integrate_ratio_weighted(one, p2, 1.0, 0.0, 0.5, 0.0),
                    std::invalid_argument);
}

TEST_CASE("weighted integrals are linear and dominated by the plain integral")
{
    std::mt19937 rng(7);
    GradedMesh mesh = test::default_mesh(64);
    GridFunction f = test::random_grid(rng, mesh);
    GridFunction g = test::random_grid(rng, mesh);
    const double a = 0.7, b = -1.3;

    GridFunction combo = a * f + (-(-b)) * g;
    double lhs = integrate_power_weighted(combo, 1.5, 0.9);
    double rhs = a * integrate_power_weighted(f, 1.5, 0.9)
               + b * integrate_power_weighted(g, 1.5, 0.9);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // (s/t)^k <= 1 for k > 0, so nonnegative f integrates to at most int f
    GridFunction fabsf = f.with_values(f.values().cwiseAbs());
    for (double t : {0.25, 0.5, 1.0})
        CHECK(integrate_power_weighted(fabsf, 0.7, t) <= integrate(fabsf, 0.0, t) + 1e-14);
}

TEST_CASE("quadrature of the interpolant converges at second order")
{
    auto smooth = [](double t) { return std::sin(3.0 * t) + t * t; };
    double exact = test::adaptive_simpson(smooth, 0.0, 1.0, 1e-14);
    double prev_err = 0.0;
    std::vector<double> errs;
    for (int n : {64, 128, 256}) {
        GridFunction f = GridFunction::sample(GradedMesh::graded(n, 1.0), smooth);
        errs.push_back(std::abs(integrate(f) - exact));
        (void)prev_err;
    }
    double order1 = std::log2(errs[0] / errs[1]);
    double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 >= 1.9);
    CHECK(order2 >= 1.9);
}

TEST_CASE("exact absolute and product integrals")
{
    GradedMesh mesh = GradedMesh::graded(4, 1.0);
    GridFunction f = GridFunction::sample(mesh, [](double t) { return t - 0.4; });
    // int |t - 0.4| over [0,1] = 0.4^2/2 + 0.6^2/2
    CHECK(integrate_abs(f) == doctest::Approx(0.08 + 0.18).epsilon(1e-14));

    GridFunction g = GridFunction::sample(mesh, [](double t) { return t; });
    CHECK(integrate_product(g, g) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}
