#pragma once

#include <array>

namespace singfde::detail {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre polynomial.
template <int N>
struct GaussRule {
    std::array<double, N> nodes;
    std::array<double, N> weights;
};

const GaussRule<16>& gauss16();
const GaussRule<8>& gauss8();

/// Integrates fn over [a, b] with the 16-point rule.
template <typename Fn>
double gauss_segment(const Fn& fn, double a, double b)
{
    if (a >= b)
        return 0.0;
    const auto& rule = gauss16();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i)
        s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
    return half * s;
}

} // namespace singfde::detail
