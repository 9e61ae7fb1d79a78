#pragma once

// Kernel-weighted lattice sums over the spectral corrections and their
// behaviour as the averaging length T = x_L grows.

#include <iosfwd>
#include <string>
#include <vector>

#include "apqho/kernel.hpp"
#include "apqho/spectrum.hpp"

namespace apqho {

struct RecoveryOptions {
    SmoothStep eta{};
    QuadratureConfig quad{};
    double fast_path_margin = 2.0;
    /// First lattice index of the sum; negative means the series start.
    long first_index = -1;
    /// Envelope C ln T / T for the convergence flag, C = envelope_constant * (1 + max |estimate|).
    double envelope_constant = 2.0;
    /// Replace final_value by the c/T extrapolation of the last two estimates.
    bool accelerate = false;

    void validate() const;
};

/// Lattice index whose point x_L = sqrt(2L + 1) is nearest to T.
long lattice_index_for(double T);

/// w_n = G(x_n, x_L) (x_{n+1} - x_n) / x_L for n in [first, L - 1].
std::vector<double> recovery_weights(double nu, long first, long L, const RecoveryOptions& opts = {});

/// (1 / x_L) sum_{n=N}^{L-1} dmu_n G(x_n, x_L) (x_{n+1} - x_n), pairwise summed.
/// RangeError when the series does not cover [N, L - 1] or L <= N.
cplx recover_at(const SpectrumSeries& series, double nu, long L, const RecoveryOptions& opts = {});

/// Same sum with precomputed weights starting at index `first`.
cplx apply_weights(const SpectrumSeries& series, long first, const std::vector<double>& weights);

enum class ConvergenceFlag { converged, slow, diverging };
const char* to_string(ConvergenceFlag flag) noexcept;

struct RecoveryEstimate {
    double T = 0.0;
    long L = 0;
    cplx value;

    bool operator==(const RecoveryEstimate&) const = default;
};

struct RecoveryResult {
    double nu = 0.0;
    std::vector<RecoveryEstimate> estimates;
    cplx final_value;
    ConvergenceFlag convergence_flag = ConvergenceFlag::slow;
};

/// recover_at at each scheduled T (snapped to the lattice). The schedule must
/// be strictly ascending after snapping.
RecoveryResult recover_limit(const SpectrumSeries& series, double nu, const std::vector<double>& T_schedule,
                             const RecoveryOptions& opts = {});

/// Flag from successive increments compared against C ln T / T.
ConvergenceFlag classify_convergence(const std::vector<RecoveryEstimate>& estimates, double envelope_constant);

struct ScanOptions {
    RecoveryOptions recovery{};
    double threshold = 0.2;        // fraction of the largest modulus
    double min_separation = -1.0;  // negative: 2 * nu_step
};

struct Peak {
    double nu = 0.0;
    cplx value;
};

struct ScanResult {
    double T = 0.0;
    long L = 0;
    std::vector<double> nu_grid;
    std::vector<cplx> values;
    std::vector<Peak> detected_peaks;  // ascending in nu
    std::vector<std::string> warnings;

    bool is_peak(std::size_t i) const;
};

ScanResult frequency_scan(const SpectrumSeries& series, double nu_min, double nu_max, double nu_step, double T,
                          const ScanOptions& opts = {});

/// Local maxima of |values| above threshold * max |values|, thinned so that no
/// two are closer than min_separation (the larger one survives).
std::vector<std::size_t> detect_peaks(const std::vector<double>& nu_grid, const std::vector<cplx>& values,
                                      double threshold, double min_separation);

/// One message per pair of neighbouring peaks closer than 2 pi / T.
std::vector<std::string> resolution_warnings(const std::vector<Peak>& peaks, double T);

/// CSV `T,L,re_value,im_value`.
void write_recovery_csv(std::ostream& out, const RecoveryResult& result);
/// CSV `nu,re_value,im_value,is_peak`.
void write_scan_csv(std::ostream& out, const ScanResult& result);

}  // namespace apqho
