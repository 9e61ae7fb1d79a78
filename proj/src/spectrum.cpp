#include "apqho/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "apqho/parallel.hpp"
#include "apqho/schlomilch.hpp"

namespace apqho {

cplx SpectrumSeries::at(long n) const {
    if (n < start_index || n >= end_index())
        throw RangeError("spectrum index " + std::to_string(n) + " outside [" + std::to_string(start_index) + ", " +
                         std::to_string(end_index()) + ")");
    return delta_mu[static_cast<std::size_t>(n - start_index)];
}

bool SpectrumSeries::is_real() const noexcept {
    return std::all_of(delta_mu.begin(), delta_mu.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

EigenSolverConfig EigenSolverConfig::for_levels(int n_max, double step, int stencil_order) {
    EigenSolverConfig c;
    c.n_max = n_max;
    c.stencil_order = stencil_order;
    c.half_width = std::sqrt(2.0 * n_max + 1.0) + 6.0;
    c.grid_points = static_cast<long>(std::ceil(2.0 * c.half_width / step)) + 1;
    return c;
}

void EigenSolverConfig::validate() const {
    if (n_max < 0) throw ConfigError("n_max must be non-negative");
    if (n_max > level_cap)
        throw ConfigError("n_max = " + std::to_string(n_max) + " exceeds the direct-solver cap of " +
                          std::to_string(level_cap) +
                          ": the discretisation error would swamp corrections of size n^{-1/4}; use the asymptotic "
                          "generator for higher levels");
    if (stencil_order != 2 && stencil_order != 4) throw ConfigError("stencil_order must be 2 or 4");
    if (!(half_width > std::sqrt(2.0 * n_max + 1.0) + 5.0))
        throw ConfigError("half_width must exceed the outermost turning point by more than 5");
    if (grid_points < n_max + 8) throw ConfigError("too few grid points for the requested levels");
    if (!(step() <= 0.02 + 1e-15)) throw ConfigError("grid step must not exceed 0.02");
}

namespace {

// Symmetric banded finite-difference Hamiltonian on the interior nodes.
struct BandedOperator {
    std::vector<double> diag;
    double off1 = 0.0;
    double off2 = 0.0;  // zero for the three-point stencil
    double pivmin = 0.0;

    // Number of eigenvalues strictly below sigma: inertia of the LDL^T
    // factorisation of (A - sigma I).
    long count_below(double sigma) const {
        const std::size_t n = diag.size();
        long neg = 0;
        if (off2 == 0.0) {
            const double b2 = off1 * off1;
            double d = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                d = (diag[i] - sigma) - (i == 0 ? 0.0 : b2 / d);
                if (std::abs(d) < pivmin) d = -pivmin;
                if (d < 0.0) ++neg;
            }
            return neg;
        }
        double d1 = 1.0, d2 = 1.0;    // d_{i-1}, d_{i-2}
        double l1_prev = 0.0;         // l_{i-1,i-2}
        for (std::size_t i = 0; i < n; ++i) {
            double l2 = 0.0, l1 = 0.0;
            double d = diag[i] - sigma;
            if (i >= 2) {
                l2 = off2 / d2;
                d -= l2 * l2 * d2;
            }
            if (i >= 1) {
                l1 = (off1 - (i >= 2 ? l2 * d2 * l1_prev : 0.0)) / d1;
                d -= l1 * l1 * d1;
            }
            if (std::abs(d) < pivmin) d = -pivmin;
            if (d < 0.0) ++neg;
            d2 = d1;
            d1 = d;
            l1_prev = l1;
        }
        return neg;
    }
};

BandedOperator build_operator(const PerturbationSpec& spec, double half_width, long grid_points, int order) {
    const double h = 2.0 * half_width / static_cast<double>(grid_points - 1);
    const double ih2 = 1.0 / (h * h);
    BandedOperator op;
    const std::size_t interior = static_cast<std::size_t>(grid_points - 2);
    op.diag.resize(interior);
    double centre = 0.0;
    if (order == 2) {
        centre = 2.0 * ih2;
        op.off1 = -ih2;
    } else {
        centre = 30.0 / 12.0 * ih2;
        op.off1 = -16.0 / 12.0 * ih2;
        op.off2 = 1.0 / 12.0 * ih2;
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < interior; ++i) {
        const double x = -half_width + static_cast<double>(i + 1) * h;
        op.diag[i] = centre + x * x + eval_q(spec, x).real();
        norm = std::max(norm, std::abs(op.diag[i]));
    }
    op.pivmin = std::numeric_limits<double>::min() * std::max(1.0, norm + 4.0 * ih2);
    return op;
}

double bisect_level(const BandedOperator& op, long k, double guess, double spread) {
    double lo = guess - spread, hi = guess + spread;
    for (double step = spread; op.count_below(lo) > k; step *= 2.0) lo -= step;
    for (double step = spread; op.count_below(hi) < k + 1; step *= 2.0) hi += step;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (op.count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> eigenvalues_on_grid(const PerturbationSpec& spec, double half_width, long grid_points,
                                        int stencil_order, int n_max) {
    if (!spec.is_real()) throw DomainError("eigensolver requires a real-valued perturbation");
    const BandedOperator op = build_operator(spec, half_width, grid_points, stencil_order);
    const double spread = sup_q(spec) + 1.0;
    std::vector<double> mus(static_cast<std::size_t>(n_max + 1));
    parallel_for(
        mus.size(),
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k)
                mus[k] = bisect_level(op, static_cast<long>(k), 2.0 * static_cast<double>(k) + 1.0, spread);
        },
        1);
    return mus;
}

std::vector<double> eigenvalues_direct(const PerturbationSpec& spec, const EigenSolverConfig& cfg) {
    cfg.validate();
    if (!spec.is_real()) throw DomainError("eigensolver requires a real-valued perturbation");
    auto coarse = eigenvalues_on_grid(spec, cfg.half_width, cfg.grid_points, cfg.stencil_order, cfg.n_max);
    if (!cfg.richardson) return coarse;
    const auto fine = eigenvalues_on_grid(spec, cfg.half_width, 2 * cfg.grid_points - 1, cfg.stencil_order, cfg.n_max);
    const double f = cfg.stencil_order == 2 ? 4.0 : 16.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) coarse[k] = (f * fine[k] - coarse[k]) / (f - 1.0);
    return coarse;
}

SpectrumSeries asymptotic_corrections(const PerturbationSpec& spec, long n_from, long n_to,
                                      const QuadratureConfig& cfg) {
    if (n_from < 0 || n_to < n_from) throw DomainError("asymptotic_corrections: need 0 <= n_from <= n_to");
    SpectrumSeries s;
    s.start_index = n_from;
    s.delta_mu.resize(static_cast<std::size_t>(n_to - n_from + 1));
    parallel_for(s.delta_mu.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            s.delta_mu[i] = forward_transform(spec, lattice_point(n_from + static_cast<long>(i)), cfg);
    });
    return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

cplx noise_sample(std::uint64_t seed, long n) {
    const std::uint64_t key = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(n)));
    const double r = std::sqrt(unit_interval(splitmix64(key)));
    const double theta = 2.0 * std::numbers::pi * unit_interval(splitmix64(key + 1));
    return std::polar(r, theta);
}

SpectrumSeries inject_admissible_noise(const SpectrumSeries& series, double sigma, double beta, std::uint64_t seed) {
    if (!(beta > 0.25))
        throw DomainError("noise exponent beta must exceed 1/4: sigma n^{-beta} has to be o(n^{-1/4})");
    SpectrumSeries out = series;
    if (sigma == 0.0) return out;
    for (long n = series.start_index; n < series.end_index(); ++n) {
        const double scale = sigma * std::pow(static_cast<double>(std::max(n, 1L)), -beta);
        out.delta_mu[static_cast<std::size_t>(n - series.start_index)] += scale * noise_sample(seed, n);
    }
    return out;
}

SpectrumSeries delta_mu_from_eigenvalues(const std::vector<double>& mus, long start_index) {
    if (start_index < 0) throw DomainError("start index must be non-negative");
    SpectrumSeries s;
    s.start_index = start_index;
    for (long n = start_index; n < static_cast<long>(mus.size()); ++n)
        s.delta_mu.emplace_back(mus[static_cast<std::size_t>(n)] - (2.0 * static_cast<double>(n) + 1.0), 0.0);
    return s;
}

void write_series_csv(std::ostream& out, const SpectrumSeries& series) {
    out << "n,x_n,re_delta_mu,im_delta_mu\n";
    char buf[160];
    for (long n = series.start_index; n < series.end_index(); ++n) {
        const cplx v = series.delta_mu[static_cast<std::size_t>(n - series.start_index)];
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", n, lattice_point(n), v.real(), v.imag());
        out << buf;
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(row, "malformed number '" + s + "'");
    }
}

}  // namespace

SpectrumSeries read_series_csv(std::istream& in) {
    std::string line;
    std::size_t row = 1;
    if (!std::getline(in, line)) throw ParseError(row, "empty series file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,x_n,re_delta_mu,im_delta_mu") throw ParseError(row, "unexpected header '" + line + "'");
    SpectrumSeries s;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 4) throw ParseError(row, "expected 4 fields, got " + std::to_string(f.size()));
        long n = 0;
        try {
            std::size_t used = 0;
            n = std::stol(f[0], &used);
            if (used != f[0].size()) throw std::invalid_argument(f[0]);
        } catch (const std::exception&) {
            throw ParseError(row, "malformed index '" + f[0] + "'");
        }
        if (n < 0) throw ParseError(row, "negative index");
        if (first) {
            s.start_index = n;
            first = false;
        } else if (n != s.end_index()) {
            throw ParseError(row, "indices must be contiguous and increasing (expected " +
                                      std::to_string(s.end_index()) + ")");
        }
        const double x = to_double(f[1], row);
        if (std::abs(x - lattice_point(n)) > 1e-9 * lattice_point(n))
            throw ParseError(row, "x_n does not equal sqrt(2n+1)");
        s.delta_mu.emplace_back(to_double(f[2], row), to_double(f[3], row));
    }
    return s;
}

}  // namespace apqho
