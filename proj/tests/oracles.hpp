#pragma once

// Reference values computed independently of the library, used as test
// oracles. Everything here is deliberately simple: fixed-rule quadrature on
// smooth periodic or substituted integrands, and power series.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// J0(x) = (1/2pi) int_0^{2pi} cos(x sin th) dth by the periodic trapezoid
/// rule, which converges geometrically once the node count exceeds |x|.
inline double j0(double x) {
    const int n = 2 * static_cast<int>(std::abs(x)) + 80;
    double s = 0;
    for (int k = 0; k < n; ++k) s += std::cos(x * std::sin(2.0 * std::numbers::pi * k / n));
    return s / n;
}

/// I0 by its power series (moderate arguments only).
inline double i0(double x) {
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 400 && term > 1e-18 * sum; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

/// Composite Gauss-Legendre 5-point rule on n equal panels.
inline double gl5(const std::function<double(double)>& f, double a, double b, int n) {
    static const double xg[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                 0.9061798459386640};
    static const double wg[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                 0.2369268850561891};
    const double h = (b - a) / n;
    double s = 0;
    for (int i = 0; i < n; ++i) {
        const double c = a + (i + 0.5) * h;
        for (int k = 0; k < 5; ++k) s += wg[k] * f(c + 0.5 * h * xg[k]);
    }
    return 0.5 * h * s;
}

/// Smoothed step on [-1, 0] as 1 - S(t + 1), S(u) = 10u^3 - 15u^4 + 6u^5.
inline double eta(double t) {
    if (t <= -1.0) return 1.0;
    if (t >= 0.0) return 0.0;
    const double u = t + 1.0;
    return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}
inline double eta_prime(double t) {
    if (t <= -1.0 || t >= 0.0) return 0.0;
    const double u = t + 1.0;
    return -30.0 * u * u * (1.0 - u) * (1.0 - u);
}

/// Kernel by the substitution t = x cosh u, which removes the inverse square
/// root:  G = -x int_0^{acosh(T/x)} phi'(x cosh u) du.
inline double kernel(double nu, double T, double x, int panels = 4000) {
    if (x <= 0.0 || x >= T) return 0.0;
    auto dphi = [&](double t) {
        return eta_prime(t - T) * std::cos(nu * t) - eta(t - T) * nu * std::sin(nu * t);
    };
    const double umax = std::acosh(T / x);
    // Split where the cutoff window starts so the rule sees smooth pieces.
    const double uw = x < T - 1.0 ? std::acosh((T - 1.0) / x) : 0.0;
    auto f = [&](double u) { return dphi(x * std::cosh(u)); };
    double s = 0;
    if (uw > 0) s += gl5(f, 0.0, uw, panels);
    s += gl5(f, uw, umax, panels / 4 + 50);
    return -x * s;
}

/// Least squares slope of log y against log x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a, sy += b, sxx += a * a, sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
