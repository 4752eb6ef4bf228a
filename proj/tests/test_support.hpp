#pragma once

#include "singfde/mesh.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace singfde::test {

inline GradedMesh default_mesh(Eigen::Index n = 512, double gamma = 2.0)
{
    return GradedMesh::graded(n, gamma);
}

/// Adaptive Simpson quadrature, the independent reference for the weighted
/// integrals (kept free of the library's segment machinery).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 30)
{
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
            double mid = 0.5 * (lo + hi);
            double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            double flm = f(lm), frm = f(rm);
            double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, d - 1)
                 + rec(mid, hi, fmid, frm, fhi, right, d - 1);
        };
    double mid = 0.5 * (a + b);
    double fa = f(a), fm = f(mid), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

/// Random piecewise-linear function with values in [-scale, scale].
inline GridFunction random_grid(std::mt19937& rng, const GradedMesh& mesh, double scale = 1.0)
{
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::VectorXd v(mesh.node_count());
    for (Eigen::Index j = 0; j < mesh.node_count(); ++j)
        v[j] = dist(rng);
    return GridFunction(mesh, v);
}

} // namespace singfde::test
