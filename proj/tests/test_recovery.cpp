#include <cmath>
#include <numbers>
#include <sstream>

#include "apqho/errors.hpp"
#include "apqho/recovery.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apqho;

namespace {
const cplx I{0.0, 1.0};

// Corrections 2 J0(x_n) from an oracle, independent of the generator.
SpectrumSeries two_cos_series(long last) {
    SpectrumSeries s;
    for (long n = 0; n <= last; ++n) s.delta_mu.emplace_back(2.0 * oracle::j0(lattice_point(n)), 0.0);
    return s;
}
}  // namespace

TEST_SUITE("recovery") {

TEST_CASE("lattice snapping") {
    CHECK(lattice_index_for(lattice_point(5000)) == 5000);
    CHECK(lattice_index_for(100.0) == 5000);
    CHECK(lattice_index_for(1.0) == 0);
    CHECK_THROWS_AS(lattice_index_for(0.5), DomainError);
}

TEST_CASE("weights are kernel times lattice spacing over T") {
    const long L = 400;
    const auto w = recovery_weights(1.0, 0, L);
    KernelConfig kc;
    kc.nu = 1.0, kc.T = lattice_point(L);
    for (long n : {0L, 17L, 250L, 399L}) {
        const double want = oracle::kernel(1.0, kc.T, lattice_point(n)) * (lattice_point(n + 1) - lattice_point(n)) / kc.T;
        CHECK(w[n] == doctest::Approx(want).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("zero series gives zero") {
    SpectrumSeries z{0, std::vector<cplx>(1000)};
    CHECK(recover_at(z, 1.0, 900) == cplx{});
    const auto r = recover_limit(z, 1.0, {10.0, 20.0, 30.0});
    for (const auto& e : r.estimates) CHECK(e.value == cplx{});
    CHECK(r.convergence_flag == ConvergenceFlag::converged);
}

TEST_CASE("two cos x: partial sums approach the Bohr coefficient on and zero off the spectrum") {
    const auto s = two_cos_series(20000);
    double prev_on = 1.0, prev_off = 1.0;
    for (double T : {50.0, 100.0, 200.0}) {
        const long L = lattice_index_for(T);
        const double on = std::abs(recover_at(s, 1.0, L) - 1.0);
        const double off = std::abs(recover_at(s, 1.7, L));
        CHECK(on < prev_on);
        CHECK(off < prev_off);
        prev_on = on, prev_off = off;
    }
    CHECK(prev_on < 0.02);
    CHECK(prev_off < 0.02);
}

TEST_CASE("schedule on a complex two-frequency series") {
    const PerturbationSpec q({{2.0, 1.0}, {1.0 + I, 2.2}}, {});
    const auto s = asymptotic_corrections(q, 0, 80000);
    const auto r = recover_limit(s, 2.2, {100.0, 200.0, 400.0});
    REQUIRE(r.estimates.size() == 3);
    const cplx target = 0.5 + 0.5 * I;
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(r.estimates[i].T > r.estimates[i - 1].T);
        CHECK(std::abs(r.estimates[i].value - target) < std::abs(r.estimates[i - 1].value - target));
    }
    CHECK(std::abs(r.estimates[2].value - r.estimates[1].value) <
          std::abs(r.estimates[1].value - r.estimates[0].value));
    CHECK(r.estimates[2].T == lattice_point(r.estimates[2].L));
    CHECK(std::abs(r.final_value - target) < 0.01);
    CHECK(r.convergence_flag == ConvergenceFlag::converged);

    RecoveryOptions acc;
    acc.accelerate = true;
    const auto ra = recover_limit(s, 2.2, {200.0, 400.0}, acc);
    CHECK(std::abs(ra.final_value - target) < std::abs(r.final_value - target));
}

TEST_CASE("noise of admissible size leaves the limit in place") {
    const PerturbationSpec q({{2.0, 1.0}}, {});
    const auto clean = asymptotic_corrections(q, 0, 80000);
    const auto noisy = inject_admissible_noise(clean, 0.5, 0.3, 42);
    const auto a = recover_limit(clean, 1.0, {100.0, 400.0});
    const auto b = recover_limit(noisy, 1.0, {100.0, 400.0});
    const double env = 2.0 * std::log(400.0) / 400.0;
    CHECK(std::abs(a.final_value - b.final_value) < env);
}

TEST_CASE("linearity, scaling and conjugation") {
    const auto s = two_cos_series(5000);
    SpectrumSeries t = s;
    for (std::size_t i = 0; i < t.delta_mu.size(); ++i) t.delta_mu[i] = std::sin(0.01 * i);
    SpectrumSeries sum = s;
    for (std::size_t i = 0; i < sum.delta_mu.size(); ++i) sum.delta_mu[i] += t.delta_mu[i];
    const long L = 4000;
    const cplx a = recover_at(s, 0.8, L), b = recover_at(t, 0.8, L), c = recover_at(sum, 0.8, L);
    CHECK(std::abs(c - (a + b)) < 1e-13);
    SpectrumSeries scaled = s;
    const cplx lam{0.3, -2.0};
    for (auto& v : scaled.delta_mu) v *= lam;
    CHECK(std::abs(recover_at(scaled, 0.8, L) - lam * a) < 1e-13);
    CHECK(a.imag() == 0.0);
}

TEST_CASE("off-spectrum estimates decay") {
    const auto s = asymptotic_corrections(PerturbationSpec({{1.0, 1.0}}, {}), 0, 80000);
    for (double nu : {0.5, 1.4, 2.0})
        CHECK(std::abs(recover_at(s, nu, lattice_index_for(400.0))) < std::abs(recover_at(s, nu, lattice_index_for(100.0))));
}

TEST_CASE("coverage errors") {
    const auto s = two_cos_series(100);
    CHECK_THROWS_AS(recover_at(s, 1.0, 200), RangeError);
    SpectrumSeries late{10, std::vector<cplx>(100)};
    CHECK_THROWS_AS(recover_at(late, 1.0, 50, RecoveryOptions{.first_index = 0}), RangeError);
    CHECK_NOTHROW(recover_at(late, 1.0, 50));
    CHECK_THROWS_AS(recover_at(late, 1.0, 10), RangeError);
    CHECK_THROWS_AS(recover_limit(s, 1.0, {10.0, 5.0}), ConfigError);
}

TEST_CASE("convergence flag classification") {
    auto est = [](std::vector<std::pair<double, double>> tv) {
        std::vector<RecoveryEstimate> e;
        for (auto [T, v] : tv) e.push_back({T, 0, cplx(v)});
        return e;
    };
    CHECK(classify_convergence(est({{100, 1.0}, {200, 1.001}}), 2.0) == ConvergenceFlag::converged);
    CHECK(classify_convergence(est({{100, 1.0}, {200, 1.5}}), 2.0) == ConvergenceFlag::slow);
    CHECK(classify_convergence(est({{100, 1.0}, {200, 1.5}, {400, 2.5}}), 2.0) == ConvergenceFlag::diverging);
    CHECK(classify_convergence(est({{100, 1.0}}), 2.0) == ConvergenceFlag::slow);
}

TEST_CASE("frequency scan finds both lines") {
    const PerturbationSpec q({{2.0, 1.0}, {1.0, 2.2}}, {});
    const auto s = asymptotic_corrections(q, 0, 80000);
    const ScanResult r = frequency_scan(s, 0.0, 3.0, 0.05, 400.0);
    REQUIRE(r.nu_grid.size() == 61);
    REQUIRE(r.detected_peaks.size() == 2);
    CHECK(r.detected_peaks[0].nu == doctest::Approx(1.0));
    CHECK(r.detected_peaks[1].nu == doctest::Approx(2.2));
    CHECK(std::abs(r.detected_peaks[0].value - 1.0) < 0.02);
    CHECK(std::abs(r.detected_peaks[1].value - 0.5) < 0.02);
    CHECK(r.warnings.empty());

    std::ostringstream out;
    write_scan_csv(out, r);
    CHECK(out.str().rfind("nu,re_value,im_value,is_peak\n0,", 0) == 0);
}

TEST_CASE("constant term shows up at zero frequency") {
    const auto s = asymptotic_corrections(PerturbationSpec({{1.0, 0.0}}, {}), 0, 20000);
    const ScanResult r = frequency_scan(s, 0.0, 1.0, 0.05, 200.0);
    REQUIRE_FALSE(r.detected_peaks.empty());
    CHECK(r.detected_peaks.front().nu == 0.0);
    CHECK(std::abs(r.detected_peaks.front().value - 1.0) < 0.05);
}

TEST_CASE("zero series scan has no peaks") {
    SpectrumSeries z{0, std::vector<cplx>(5001)};
    CHECK(frequency_scan(z, 0.0, 2.0, 0.1, 100.0).detected_peaks.empty());
}

TEST_CASE("peaks closer than the resolution limit are flagged") {
    const double T = 100.0;  // 2 pi / T = 0.0628
    const std::vector<Peak> close{{1.0, 1.0}, {1.05, 1.0}, {1.2, 1.0}};
    const auto w = resolution_warnings(close, T);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("1.05") != std::string::npos);
    CHECK(resolution_warnings({{1.0, 1.0}, {1.07, 1.0}}, T).empty());
}

TEST_CASE("peak detection rules") {
    const std::vector<double> nu{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    const std::vector<cplx> v{0.1, 1.0, 0.2, 0.9, 0.1, 0.15};
    CHECK(detect_peaks(nu, v, 0.2, 0.0) == std::vector<std::size_t>{1, 3});
    CHECK(detect_peaks(nu, v, 0.2, 0.25) == std::vector<std::size_t>{1});
    CHECK(detect_peaks(nu, v, 0.95, 0.0) == std::vector<std::size_t>{1});
}

TEST_CASE("recovery CSV") {
    RecoveryResult r;
    r.estimates = {{lattice_point(4), 4, cplx(0.25, -1.0)}};
    std::ostringstream out;
    write_recovery_csv(out, r);
    CHECK(out.str() == "T,L,re_value,im_value\n3,4,0.25,-1\n");
}

}
