#include "singfde/detail/gauss.hpp"

#include <cmath>

namespace singfde::detail {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

template <int N>
GaussRule<N> build_rule()
{
    GaussRule<N> rule{};
    for (int i = 0; i < N; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(N, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        legendre(N, x, p, dp);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussRule<16>& gauss16()
{
    static const GaussRule<16> rule = build_rule<16>();
    return rule;
}

const GaussRule<8>& gauss8()
{
    static const GaussRule<8> rule = build_rule<8>();
    return rule;
}

} // namespace singfde::detail
