#include "singfde/operators.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace singfde;

namespace {

GridFunction on_default(double c)
{
    return GridFunction::constant(test::default_mesh(64), c);
}

GridFunction sampled(const std::function<double(double)>& fn, Eigen::Index n = 64)
{
    return GridFunction::sample(test::default_mesh(n), fn);
}

RegularOperator delay_operator(double a, double b)
{
    GridFunction q = on_default(a);
    GridFunction h = sampled([b](double t) { return b * t; });
    return RegularOperator::single_point(q, h);
}

KernelTerm constant_kernel(double c, Eigen::Index n = 16)
{
    GradedMesh mesh = GradedMesh::graded(n, 1.0);
    Eigen::MatrixXd K = Eigen::MatrixXd::Constant(mesh.node_count(), mesh.node_count(), c);
    return KernelTerm(mesh, K);
}

} // namespace

TEST_CASE("point and kernel application")
{
    GridFunction x = sampled([](double t) { return t; });

    RegularOperator endpoint = RegularOperator::single_point(on_default(2.0), 1.0);
    GridFunction y1 = apply(endpoint, x);
    for (Eigen::Index j = 0; j < y1.node_count(); ++j)
        CHECK(y1.value(j) == doctest::Approx(2.0).epsilon(1e-14));

    RegularOperator half = delay_operator(1.0, 0.5);
    GridFunction y2 = apply(half, x);
    for (Eigen::Index j = 0; j < y2.node_count(); ++j)
        CHECK(y2.value(j) == doctest::Approx(0.5 * x.mesh().node(j)).epsilon(1e-13));

    RegularOperator kernel_op({}, {constant_kernel(1.0)});
    GridFunction y3 = apply(kernel_op, x);
    for (Eigen::Index j = 0; j < y3.node_count(); ++j)
        CHECK(y3.value(j) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("part norms")
{
    // T x = 2 x(1) - x(t/2)
    std::vector<PointTerm> terms;
    terms.push_back(PointTerm{on_default(2.0), 1.0});
    terms.push_back(PointTerm{on_default(-1.0), sampled([](double t) { return 0.5 * t; })});
    auto norms = part_norms(RegularOperator(std::move(terms), {}));
    CHECK(norms.first == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(norms.second == doctest::Approx(1.0).epsilon(1e-14));

    auto zero = part_norms(RegularOperator::zero());
    CHECK(zero.first == 0.0);
    CHECK(zero.second == 0.0);

    // q(t) = t - 0.5 splits into two triangles of area 1/8
    RegularOperator tilted =
        RegularOperator::single_point(sampled([](double t) { return t - 0.5; }), 0.3);
    auto tn = part_norms(tilted);
    CHECK(tn.first == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(tn.second == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("part norms of a sign-changing kernel")
{
    // K(t,s) = t - s is bilinear, so the node sample reproduces it exactly:
    // the positive part integrates to 1/6.
    GradedMesh mesh = GradedMesh::graded(8, 1.0);
    Eigen::MatrixXd K(mesh.node_count(), mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
            K(i, j) = mesh.node(i) - mesh.node(j);
    auto norms = part_norms(RegularOperator({}, {KernelTerm(mesh, K)}));
    CHECK(norms.first == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
    CHECK(norms.second == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
}

TEST_CASE("part norms scale linearly")
{
    std::mt19937 rng(17);
    GridFunction q = test::random_grid(rng, test::default_mesh(32));
    const double lambda = 3.5;
    auto n1 = part_norms(RegularOperator::single_point(q, 0.7));
    auto n2 = part_norms(RegularOperator::single_point(lambda * q, 0.7));
    CHECK(n2.first == doctest::Approx(lambda * n1.first).epsilon(1e-13));
    CHECK(n2.second == doctest::Approx(lambda * n1.second).epsilon(1e-13));
}

TEST_CASE("volterra classification")
{
    CHECK(classify_volterra(delay_operator(1.0, 0.5)) == VolterraClass::volterra);
    CHECK(classify_volterra(RegularOperator::single_point(on_default(1.0), 1.0))
          == VolterraClass::anti_volterra);
    CHECK(classify_volterra(RegularOperator::single_point(on_default(1.0), 0.3))
          == VolterraClass::neither);
    CHECK(classify_volterra(delay_operator(1.0, 1.0)) == VolterraClass::both);

    // kernel vanishing above the diagonal is Volterra at the node level
    GradedMesh mesh = GradedMesh::graded(8, 1.0);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(mesh.node_count(), mesh.node_count());
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            K(i, j) = 1.0;
    CHECK(classify_volterra(RegularOperator({}, {KernelTerm(mesh, K)}))
          == VolterraClass::volterra);
}

TEST_CASE("regular splitting and positivity")
{
    std::mt19937 rng(29);
    GradedMesh mesh = test::default_mesh(48);
    std::vector<PointTerm> terms;
    terms.push_back(PointTerm{test::random_grid(rng, mesh), 0.4});
    terms.push_back(PointTerm{test::random_grid(rng, mesh),
                              GridFunction::sample(mesh, [](double t) { return 0.8 * t; })});
    GradedMesh kmesh = GradedMesh::graded(8, 1.0);
    Eigen::MatrixXd K(kmesh.node_count(), kmesh.node_count());
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = 0; j < K.cols(); ++j)
            K(i, j) = dist(rng);
    RegularOperator T({terms}, {KernelTerm(kmesh, K)});

    for (int trial = 0; trial < 10; ++trial) {
        GridFunction x = test::random_grid(rng, mesh);
        GridFunction whole = apply(T, x);
        GridFunction plus = apply_part(T, x, OperatorPart::plus);
        GridFunction minus = apply_part(T, x, OperatorPart::minus);
        for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
            CHECK(whole.value(j)
                  == doctest::Approx(plus.value(j) - minus.value(j)).epsilon(1e-10));
    }

    GridFunction nonneg = GridFunction::sample(mesh, [](double t) { return 1.0 + t; });
    GridFunction pp = apply_part(T, nonneg, OperatorPart::plus);
    GridFunction pm = apply_part(T, nonneg, OperatorPart::minus);
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j) {
        CHECK(pp.value(j) >= -1e-12);
        CHECK(pm.value(j) >= -1e-12);
    }

    // u-boundedness: |Tx| <= (|T| 1) * sup|x| at every node
    GridFunction u = absolute_unit_image(T, mesh);
    GridFunction x = test::random_grid(rng, mesh);
    GridFunction y = apply(T, x);
    double sup = sup_abs(x);
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        CHECK(std::abs(y.value(j)) <= u.value(j) * sup + 1e-10);
}

TEST_CASE("weighted gain of delays")
{
    WeightFunction nu = WeightFunction::power(1.0);

    ExtendedReal g1 = weighted_gain(delay_operator(1.0, 0.5), nu);
    CHECK(g1.is_finite());
    CHECK(g1.value() == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(weighted_gain(RegularOperator::zero(), nu).value() == 0.0);

    // evaluation at the right endpoint has gain nu(1)/nu(t), unbounded
    ExtendedReal g3 = weighted_gain(RegularOperator::single_point(on_default(1.0), 1.0), nu);
    CHECK_FALSE(g3.is_finite());
}

TEST_CASE("gain restricted near zero")
{
    // For nu = -1/ln(t/2) a proportional delay has ratio nu(bt)/nu(t) -> 1,
    // so the limsup-at-0 diagnostic approaches |a| from below.
    WeightFunction nu = WeightFunction::log_weight();
    RegularOperator T = delay_operator(0.5, 0.5);
    double near = weighted_gain_near_zero(T, nu, 1e-3);
    CHECK(near > 0.45);
    CHECK(near < 0.5 + 1e-12);
}
