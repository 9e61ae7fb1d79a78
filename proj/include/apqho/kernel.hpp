#pragma once

// Recovery kernel G(x, T): the Abel (inverse Schlomilch) preimage of the
// cutoff cosine phi(t) = eta(t - T) cos(nu t),
//
//     G(x, T) = -x * int_x^T phi'(t) / sqrt(t^2 - x^2) dt,   0 <= x <= T.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "apqho/quadrature.hpp"

namespace apqho {

/// C^2 step: 1 on (-inf, -1], 0 on [0, inf), and the degree-5 polynomial
/// matching value, slope and curvature at both joints in between.
class SmoothStep {
public:
    double value(double t) const noexcept;
    double first(double t) const noexcept;
    double second(double t) const noexcept;
    double operator()(double t) const noexcept { return value(t); }

    /// Monomial coefficients c[k] of t^k for the piece on [-1, 0].
    static std::array<double, 6> coefficients() noexcept;
};

struct KernelConfig {
    double nu = 0.0;
    double T = 10.0;
    SmoothStep eta{};
    QuadratureConfig quad{};
    double fast_path_margin = 2.0;

    void validate() const;
};

/// Cutoff cosine and its analytic derivatives.
double cutoff_cosine(const KernelConfig& cfg, double t);
double cutoff_cosine_prime(const KernelConfig& cfg, double t);
double cutoff_cosine_second(const KernelConfig& cfg, double t);

/// Defining integral evaluated with the square-root substitution.
double kernel_direct(const KernelConfig& cfg, double x);

/// Same value through the Bessel closed form of the infinite-range sine
/// integral, a contour-rotated remainder beyond T and a fixed rule on the
/// cutoff window [T-1, T]. Falls back to kernel_direct within
/// `fast_path_margin` of T.
double kernel_fast(const KernelConfig& cfg, double x);

/// Kernel values at many points, evaluated in parallel; output order matches
/// input order. Failures are collected into a BatchError.
std::vector<double> kernel_batch(const KernelConfig& cfg, std::span<const double> xs);

/// Precomputed fast-path state for one (nu, T); cheap to evaluate repeatedly.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const KernelConfig& cfg);

    double operator()(double x) const;
    bool on_fast_path(double x) const noexcept { return x >= 0.0 && x <= cfg_.T - cfg_.fast_path_margin; }
    const KernelConfig& config() const noexcept { return cfg_; }

private:
    double fast(double x) const;
    double window(double x) const;
    double tail(double x) const;
    double tail_graded(double x, double d) const;

    KernelConfig cfg_;
    std::vector<double> window_t_;
    std::vector<double> window_wf_;
    std::vector<double> tail_sigma_;
    std::vector<double> tail_weight_;
    std::complex<double> tail_phase_;
};

}  // namespace apqho
