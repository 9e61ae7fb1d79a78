#include "apqho/bessel.hpp"

#include <cmath>
#include <numbers>

namespace apqho {
namespace {

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && std::abs(term) < 1e-18) break;
    }
    return sum;
}

// Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalised with
// J0 + 2 (J2 + J4 + ...) = 1.
double j0_miller(double x) {
    int start = static_cast<int>(x + 30.0 + 8.0 * std::cbrt(x));
    start += start % 2;
    double next = 0.0;
    double cur = 1e-30;
    double norm = 0.0;
    double j0 = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = (2.0 * k / x) * cur - next;
        next = cur;
        cur = prev;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 = cur;
    norm += j0;
    return j0 / norm;
}

double j0_hankel(double x) {
    // P ~ sum (-1)^k c_{2k} x^{-2k}, Q ~ sum (-1)^k c_{2k+1} x^{-2k-1},
    // c_m = prod_{j<=m} (-(2j-1)^2) / (m! 8^m).
    double p = 0.0, q = 0.0;
    double c = 1.0;
    double last = HUGE_VAL;
    for (int m = 0; m < 60; ++m) {
        if (m > 0) c *= -((2.0 * m - 1) * (2.0 * m - 1)) / (8.0 * m * x);
        const double mag = std::abs(c);
        if (mag > last) break;
        last = mag;
        const double sign = ((m / 2) % 2 == 0) ? 1.0 : -1.0;
        if (m % 2 == 0)
            p += sign * c;
        else
            q += sign * c;
        if (mag < 1e-18) break;
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x <= 8.0) return j0_series(x);
    if (x <= 25.0) return j0_miller(x);
    return j0_hankel(x);
}

}  // namespace apqho
