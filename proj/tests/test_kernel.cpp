#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "apqho/bessel.hpp"
#include "apqho/errors.hpp"
#include "apqho/kernel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apqho;

namespace {

KernelConfig make(double nu, double T) {
    KernelConfig c;
    c.nu = nu;
    c.T = T;
    return c;
}

// Degree-5 polynomial with value 1, 0 and vanishing first and second
// derivatives at t = -1 and t = 0, by Gaussian elimination.
std::array<double, 6> step_polynomial() {
    double A[6][7] = {};
    auto row = [&](int r, double t, int deriv, double rhs) {
        for (int k = 0; k < 6; ++k) {
            double c = 0;
            if (k >= deriv) {
                c = 1;
                for (int j = 0; j < deriv; ++j) c *= (k - j);
                c *= std::pow(t, k - deriv);
            }
            A[r][k] = c;
        }
        A[r][6] = rhs;
    };
    row(0, -1, 0, 1), row(1, -1, 1, 0), row(2, -1, 2, 0), row(3, 0, 0, 0), row(4, 0, 1, 0), row(5, 0, 2, 0);
    for (int c = 0; c < 6; ++c) {
        int p = c;
        for (int r = c + 1; r < 6; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        for (int k = 0; k < 7; ++k) std::swap(A[c][k], A[p][k]);
        for (int r = 0; r < 6; ++r)
            if (r != c) {
                const double f = A[r][c] / A[c][c];
                for (int k = 0; k < 7; ++k) A[r][k] -= f * A[c][k];
            }
    }
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) out[k] = A[k][6] / A[k][k];
    return out;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("smooth step coefficients solve the C2 matching conditions") {
    const auto want = step_polynomial();
    const auto got = SmoothStep::coefficients();
    for (int k = 0; k < 6; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-13));
}

TEST_CASE("smooth step values and derivatives") {
    SmoothStep eta;
    CHECK(eta(-3.0) == 1.0);
    CHECK(eta(-1.0) == 1.0);
    CHECK(eta(0.0) == 0.0);
    CHECK(eta(2.0) == 0.0);
    CHECK(eta(-0.5) == doctest::Approx(0.5));
    for (double t : {-1.0, 0.0}) {
        CHECK(std::abs(eta.first(t)) < 1e-15);
        CHECK(std::abs(eta.second(t)) < 1e-13);
    }
    for (double t : {-0.9, -0.4, -0.05}) {
        CHECK(eta(t) == doctest::Approx(oracle::eta(t)).epsilon(1e-14));
        CHECK(eta.first(t) == doctest::Approx(oracle::eta_prime(t)).epsilon(1e-13));
        const double h = 1e-5;
        CHECK(eta.second(t) == doctest::Approx((eta.first(t + h) - eta.first(t - h)) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("cutoff cosine vanishes with its slope at T") {
    for (double nu : {0.0, 0.7, 3.0}) {
        const auto c = make(nu, 40.0);
        CHECK(cutoff_cosine(c, 40.0) == 0.0);
        CHECK(std::abs(cutoff_cosine_prime(c, 40.0)) < 1e-14);
        CHECK(cutoff_cosine(c, 10.0) == doctest::Approx(std::cos(nu * 10.0)));
        const double h = 1e-5, t = 39.4;
        CHECK(cutoff_cosine_second(c, t) ==
              doctest::Approx((cutoff_cosine_prime(c, t + h) - cutoff_cosine_prime(c, t - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("kernel matches the substituted defining integral") {
    for (double nu : {0.0, 0.5, 1.0, 3.0})
        for (double T : {10.0, 60.0})
            for (double x : {0.5, 3.0, T / 2, T - 2.5, T - 1.5, T - 0.5, T - 1e-3}) {
                const auto c = make(nu, T);
                const double want = oracle::kernel(nu, T, x);
                CHECK(kernel_direct(c, x) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
                CHECK(kernel_fast(c, x) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
            }
}

TEST_CASE("fast path agrees with direct quadrature at large T") {
    for (double nu : {0.05, 1.0, 3.0}) {
        const auto c = make(nu, 1000.0);
        const KernelEvaluator ev(c);
        for (double x : {1.0, 123.4, 700.0, 990.0, 997.9}) {
            CHECK(ev.on_fast_path(x));
            CHECK(ev(x) == doctest::Approx(kernel_direct(c, x)).epsilon(1e-10).scale(1.0));
        }
        CHECK_FALSE(ev.on_fast_path(998.5));
    }
}

TEST_CASE("kernel endpoints") {
    const auto c = make(1.0, 30.0);
    CHECK(kernel_direct(c, 0.0) == 0.0);
    CHECK(kernel_direct(c, 30.0) == 0.0);
    CHECK(kernel_fast(c, 0.0) == 0.0);
    CHECK(std::abs(kernel_fast(c, 30.0 - 1e-9)) < 1e-6);
}

TEST_CASE("kernel over nu x approaches (pi/2) J0(nu x) as T grows") {
    const double nu = 1.0, x = 5.0;
    const double target = std::numbers::pi / 2 * bessel_j0(nu * x);
    std::vector<double> diffs;
    double prev = 0;
    for (double T : {50.0, 100.0, 200.0, 400.0, 800.0}) {
        const double v = kernel_fast(make(nu, T), x) / (nu * x);
        if (T > 50.0) diffs.push_back(std::abs(v - prev));
        prev = v;
    }
    for (std::size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i] < diffs[i - 1]);
    CHECK(std::abs(prev - target) < 1e-3);
    // The 2/pi-free constant, J0 itself, is clearly excluded.
    CHECK(std::abs(prev - bessel_j0(nu * x)) > 0.05);
}

TEST_CASE("weighted kernel bound on a coarse grid") {
    double c = 0;
    for (double T : {50.0, 100.0})
        for (double nu : {0.0, 0.5, 3.0}) {
            const KernelEvaluator ev(make(nu, T));
            for (double x = 1.0; x < T; x += 0.37) c = std::max(c, std::abs(ev(x)) / ((1 + nu) * std::sqrt(x)));
        }
    CHECK(c < 5.0);
}

TEST_CASE("batch evaluation keeps order and reports failures by index") {
    const auto c = make(1.0, 20.0);
    const std::vector<double> xs{1.0, 5.0, 19.5, 0.0};
    const auto g = kernel_batch(c, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(g[i] == kernel_fast(c, xs[i]));
    const std::vector<double> bad{1.0, -2.0, 3.0, 25.0};
    try {
        kernel_batch(c, bad);
        FAIL("expected BatchError");
    } catch (const BatchError& e) {
        CHECK(e.indices() == std::vector<std::size_t>{1, 3});
    }
}

TEST_CASE("configuration checks") {
    CHECK_THROWS_AS(kernel_direct(make(1.0, 2.0), 1.0), ConfigError);
    CHECK_THROWS_AS(kernel_direct(make(-1.0, 10.0), 1.0), ConfigError);
    auto c = make(1.0, 10.0);
    c.fast_path_margin = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

}
