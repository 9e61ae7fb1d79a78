#include "apqho/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "apqho/errors.hpp"
#include "apqho/parallel.hpp"

namespace apqho {

void RecoveryOptions::validate() const {
    quad.validate();
    if (!(fast_path_margin > 1.0)) throw ConfigError("fast_path_margin must exceed 1");
    if (!(envelope_constant > 0.0)) throw ConfigError("envelope_constant must be positive");
}

long lattice_index_for(double T) {
    if (!(T >= 1.0) || !std::isfinite(T)) throw DomainError("averaging length T must be finite and >= 1");
    return std::lround((T * T - 1.0) / 2.0);
}

std::vector<double> recovery_weights(double nu, long first, long L, const RecoveryOptions& opts) {
    opts.validate();
    if (first < 0 || L <= first) throw RangeError("need 0 <= N < L for the lattice sum");
    KernelConfig kc;
    kc.nu = nu;
    kc.T = lattice_point(L);
    kc.eta = opts.eta;
    kc.quad = opts.quad;
    kc.fast_path_margin = opts.fast_path_margin;
    const std::size_t count = static_cast<std::size_t>(L - first);
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) xs[i] = lattice_point(first + static_cast<long>(i));
    std::vector<double> w = kernel_batch(kc, xs);
    for (std::size_t i = 0; i < count; ++i) {
        const double next = lattice_point(first + static_cast<long>(i) + 1);
        w[i] *= 2.0 / (next + xs[i]) / kc.T;
    }
    return w;
}

cplx apply_weights(const SpectrumSeries& series, long first, const std::vector<double>& weights) {
    const long last = first + static_cast<long>(weights.size()) - 1;
    if (weights.empty()) return {};
    if (!series.covers(first, last))
        throw RangeError("series covers [" + std::to_string(series.start_index) + ", " +
                         std::to_string(series.end_index() - 1) + "] but the sum needs [" + std::to_string(first) +
                         ", " + std::to_string(last) + "]");
    std::vector<cplx> terms(weights.size());
    const std::size_t offset = static_cast<std::size_t>(first - series.start_index);
    for (std::size_t i = 0; i < weights.size(); ++i) terms[i] = series.delta_mu[offset + i] * weights[i];
    return pairwise_sum<cplx>(terms);
}

namespace {

long first_index(const SpectrumSeries& series, const RecoveryOptions& opts) {
    return opts.first_index < 0 ? series.start_index : opts.first_index;
}

}  // namespace

cplx recover_at(const SpectrumSeries& series, double nu, long L, const RecoveryOptions& opts) {
    const long first = first_index(series, opts);
    if (L <= first) throw RangeError("L must exceed the first lattice index");
    if (!series.covers(first, L - 1))
        throw RangeError("series covers [" + std::to_string(series.start_index) + ", " +
                         std::to_string(series.end_index() - 1) + "] but L = " + std::to_string(L) + " needs [" +
                         std::to_string(first) + ", " + std::to_string(L - 1) + "]");
    return apply_weights(series, first, recovery_weights(nu, first, L, opts));
}

const char* to_string(ConvergenceFlag flag) noexcept {
    switch (flag) {
        case ConvergenceFlag::converged: return "converged";
        case ConvergenceFlag::slow: return "slow";
        case ConvergenceFlag::diverging: return "diverging";
    }
    return "unknown";
}

ConvergenceFlag classify_convergence(const std::vector<RecoveryEstimate>& estimates, double envelope_constant) {
    double scale = 0.0;
    for (const auto& e : estimates) scale = std::max(scale, std::abs(e.value));
    if (scale == 0.0) return ConvergenceFlag::converged;
    if (estimates.size() < 2) return ConvergenceFlag::slow;
    const double c = envelope_constant * (1.0 + scale);
    const std::size_t k = estimates.size() - 1;
    const double T = estimates[k].T;
    const double step = std::abs(estimates[k].value - estimates[k - 1].value);
    if (step <= c * std::log(T) / T) return ConvergenceFlag::converged;
    if (k >= 2 && step > std::abs(estimates[k - 1].value - estimates[k - 2].value)) return ConvergenceFlag::diverging;
    return ConvergenceFlag::slow;
}

RecoveryResult recover_limit(const SpectrumSeries& series, double nu, const std::vector<double>& T_schedule,
                             const RecoveryOptions& opts) {
    if (T_schedule.empty()) throw ConfigError("empty T schedule");
    RecoveryResult r;
    r.nu = nu;
    long prev = -1;
    for (double T : T_schedule) {
        const long L = lattice_index_for(T);
        if (L <= prev) throw ConfigError("T schedule must be strictly ascending on the lattice");
        prev = L;
        r.estimates.push_back({lattice_point(L), L, recover_at(series, nu, L, opts)});
    }
    r.convergence_flag = classify_convergence(r.estimates, opts.envelope_constant);
    r.final_value = r.estimates.back().value;
    if (opts.accelerate && r.estimates.size() >= 2) {
        const auto& a = r.estimates[r.estimates.size() - 2];
        const auto& b = r.estimates.back();
        r.final_value = (b.T * b.value - a.T * a.value) / (b.T - a.T);
    }
    return r;
}

std::vector<std::size_t> detect_peaks(const std::vector<double>& nu_grid, const std::vector<cplx>& values,
                                      double threshold, double min_separation) {
    const std::size_t n = values.size();
    std::vector<double> mag(n);
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, mag[i] = std::abs(values[i]));
    std::vector<std::size_t> cand;
    if (top == 0.0) return cand;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || mag[i] >= mag[i - 1];
        const bool right = i + 1 == n || mag[i] > mag[i + 1];
        if (left && right && mag[i] > threshold * top) cand.push_back(i);
    }
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t i : cand) {
        const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return std::abs(nu_grid[k] - nu_grid[i]) < min_separation;
        });
        if (clear) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<std::string> resolution_warnings(const std::vector<Peak>& peaks, double T) {
    std::vector<std::string> out;
    const double resolution = 2.0 * std::numbers::pi / T;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        if (peaks[i].nu - peaks[i - 1].nu >= resolution) continue;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "peaks at nu = %.6g and %.6g are closer than 2pi/T = %.4g; unresolvable at T = %.6g",
                      peaks[i - 1].nu, peaks[i].nu, resolution, T);
        out.emplace_back(buf);
    }
    return out;
}

bool ScanResult::is_peak(std::size_t i) const {
    return std::any_of(detected_peaks.begin(), detected_peaks.end(),
                       [&](const Peak& p) { return p.nu == nu_grid.at(i); });
}

ScanResult frequency_scan(const SpectrumSeries& series, double nu_min, double nu_max, double nu_step, double T,
                          const ScanOptions& opts) {
    if (!(nu_step > 0.0)) throw ConfigError("nu_step must be positive");
    if (!(nu_min >= 0.0) || !(nu_max >= nu_min)) throw ConfigError("need 0 <= nu_min <= nu_max");
    if (!(opts.threshold >= 0.0 && opts.threshold < 1.0)) throw ConfigError("threshold must lie in [0, 1)");
    ScanResult s;
    s.L = lattice_index_for(T);
    s.T = lattice_point(s.L);
    const long count = static_cast<long>(std::floor((nu_max - nu_min) / nu_step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) s.nu_grid.push_back(nu_min + static_cast<double>(k) * nu_step);
    s.values.resize(s.nu_grid.size());
    parallel_for(
        s.nu_grid.size(),
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) s.values[i] = recover_at(series, s.nu_grid[i], s.L, opts.recovery);
        },
        1);
    const double sep = opts.min_separation < 0.0 ? 2.0 * nu_step : opts.min_separation;
    for (std::size_t i : detect_peaks(s.nu_grid, s.values, opts.threshold, sep))
        s.detected_peaks.push_back({s.nu_grid[i], s.values[i]});
    s.warnings = resolution_warnings(s.detected_peaks, s.T);
    return s;
}

void write_recovery_csv(std::ostream& out, const RecoveryResult& result) {
    out << "T,L,re_value,im_value\n";
    char buf[160];
    for (const auto& e : result.estimates) {
        std::snprintf(buf, sizeof buf, "%.17g,%ld,%.17g,%.17g\n", e.T, e.L, e.value.real(), e.value.imag());
        out << buf;
    }
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
    out << "nu,re_value,im_value,is_peak\n";
    char buf[160];
    for (std::size_t i = 0; i < result.nu_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", result.nu_grid[i], result.values[i].real(),
                      result.values[i].imag(), result.is_peak(i) ? 1 : 0);
        out << buf;
    }
}

}  // namespace apqho
