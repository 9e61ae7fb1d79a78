#pragma once

// Spectral corrections Delta mu_n = mu_n - (2n + 1) on the lattice
// x_n = sqrt(2n + 1), produced either by a finite-difference eigensolver
// or by the Schlomilch (first-order asymptotic) generator.

#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "apqho/perturbation.hpp"
#include "apqho/quadrature.hpp"

namespace apqho {

inline double lattice_point(long n) { return std::sqrt(2.0 * static_cast<double>(n) + 1.0); }

/// Contiguous run of corrections starting at index `start_index`.
struct SpectrumSeries {
    long start_index = 0;
    std::vector<cplx> delta_mu;

    long size() const noexcept { return static_cast<long>(delta_mu.size()); }
    /// One past the last index.
    long end_index() const noexcept { return start_index + size(); }
    bool covers(long first, long last) const noexcept {
        return first >= start_index && last < end_index() && first <= last;
    }
    /// Correction at absolute index n; RangeError outside the series.
    cplx at(long n) const;
    bool is_real() const noexcept;

    bool operator==(const SpectrumSeries&) const = default;
};

/// Direct eigensolver cap: beyond a few hundred levels desk-scale grids cannot
/// resolve corrections that are small against n^{-1/4}.
inline constexpr int kEigenLevelCap = 200;

struct EigenSolverConfig {
    double half_width = 0.0;  // Dirichlet box [-X, X]
    long grid_points = 0;     // including both boundary nodes
    int stencil_order = 2;    // 2: three-point, 4: five-point
    int n_max = 0;
    bool richardson = true;   // extrapolate over (h, h/2)
    int level_cap = kEigenLevelCap;

    /// X = sqrt(2 n_max + 1) + 6 and the grid for the requested step.
    static EigenSolverConfig for_levels(int n_max, double step = 0.0025, int stencil_order = 2);

    double step() const noexcept { return 2.0 * half_width / static_cast<double>(grid_points - 1); }
    void validate() const;
};

/// Lowest n_max + 1 eigenvalues of -d^2/dx^2 + x^2 + q(x) discretised on
/// [-X, X] with Dirichlet ends, each isolated by Sturm-count bisection.
/// Richardson extrapolation over (h, h/2) when enabled. Real specs only.
std::vector<double> eigenvalues_direct(const PerturbationSpec& spec, const EigenSolverConfig& cfg);

/// Single-grid eigenvalues (no extrapolation) for refinement studies.
std::vector<double> eigenvalues_on_grid(const PerturbationSpec& spec, double half_width, long grid_points,
                                        int stencil_order, int n_max);

/// Delta mu_n = g_q(x_n) for n in [n_from, n_to].
SpectrumSeries asymptotic_corrections(const PerturbationSpec& spec, long n_from, long n_to,
                                      const QuadratureConfig& cfg = {});

/// Adds sigma * max(n,1)^{-beta} * u_n with u_n uniform in the complex unit
/// disk, drawn from a counter-based generator keyed on (seed, n). beta must
/// exceed 1/4 so the contamination stays o(n^{-1/4}).
SpectrumSeries inject_admissible_noise(const SpectrumSeries& series, double sigma, double beta, std::uint64_t seed);

/// The unit-disk draw used by inject_admissible_noise.
cplx noise_sample(std::uint64_t seed, long n);

SpectrumSeries delta_mu_from_eigenvalues(const std::vector<double>& mus, long start_index);

/// CSV `n,x_n,re_delta_mu,im_delta_mu`, 17 significant digits.
void write_series_csv(std::ostream& out, const SpectrumSeries& series);
SpectrumSeries read_series_csv(std::istream& in);

}  // namespace apqho
