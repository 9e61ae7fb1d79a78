#include "apqho/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "apqho/bessel.hpp"
#include "apqho/parallel.hpp"

namespace apqho {

// eta(t) = 1 - S(t + 1) with the quintic smoothstep S(u) = 10u^3 - 15u^4 + 6u^5.
double SmoothStep::value(double t) const noexcept {
    if (t <= -1.0) return 1.0;
    if (t >= 0.0) return 0.0;
    const double u = t + 1.0;
    return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double SmoothStep::first(double t) const noexcept {
    if (t <= -1.0 || t >= 0.0) return 0.0;
    const double u = t + 1.0;
    const double v = u * (1.0 - u);
    return -30.0 * v * v;
}

double SmoothStep::second(double t) const noexcept {
    if (t <= -1.0 || t >= 0.0) return 0.0;
    const double u = t + 1.0;
    return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

std::array<double, 6> SmoothStep::coefficients() noexcept {
    // 1 - 10u^3 + 15u^4 - 6u^5 expanded around u = t + 1.
    const std::array<double, 6> in_u{1.0, 0.0, 0.0, -10.0, 15.0, -6.0};
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            out[j] += in_u[k] * binom;
            binom = binom * (k - j) / (j + 1);
        }
    }
    return out;
}

void KernelConfig::validate() const {
    if (!std::isfinite(nu) || nu < 0.0) throw ConfigError("kernel frequency must be finite and non-negative");
    if (!std::isfinite(T) || !(T > 2.0)) throw ConfigError("kernel truncation T must exceed 2");
    if (!(fast_path_margin > 1.0)) throw ConfigError("fast_path_margin must exceed 1");
    quad.validate();
}

double cutoff_cosine(const KernelConfig& cfg, double t) { return cfg.eta.value(t - cfg.T) * std::cos(cfg.nu * t); }

double cutoff_cosine_prime(const KernelConfig& cfg, double t) {
    const double s = t - cfg.T;
    return cfg.eta.first(s) * std::cos(cfg.nu * t) - cfg.nu * cfg.eta.value(s) * std::sin(cfg.nu * t);
}

double cutoff_cosine_second(const KernelConfig& cfg, double t) {
    const double s = t - cfg.T;
    const double c = std::cos(cfg.nu * t);
    const double sn = std::sin(cfg.nu * t);
    return cfg.eta.second(s) * c - 2.0 * cfg.nu * cfg.eta.first(s) * sn - cfg.nu * cfg.nu * cfg.eta.value(s) * c;
}

double kernel_direct(const KernelConfig& cfg, double x) {
    cfg.validate();
    if (!(x >= 0.0) || x > cfg.T) throw DomainError("kernel_direct: x must lie in [0, T]");
    if (x == cfg.T || x == 0.0) return 0.0;
    auto dphi = [&](double t) { return cutoff_cosine_prime(cfg, t); };
    const double knee = cfg.T - 1.0;
    double integral = 0.0;
    if (x < knee) {
        integral = integrate_sqrt_singular(dphi, x, x, knee, cfg.quad, cfg.nu) +
                   integrate_sqrt_singular(dphi, x, knee, cfg.T, cfg.quad, cfg.nu);
    } else {
        integral = integrate_sqrt_singular(dphi, x, x, cfg.T, cfg.quad, cfg.nu);
    }
    return -x * integral;
}

namespace {

constexpr int kWindowOrder = 24;
constexpr int kTailOrder = 20;
constexpr double kTailPanel = 8.0;   // panel length in sigma = nu * s
constexpr double kTailEnd = 40.0;    // exp(-40) ~ 4e-18

void append_panel(std::vector<double>& nodes, std::vector<double>& weights, const GaussRule& rule, double a, double b,
                  bool damped) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = c + h * rule.nodes[i];
        nodes.push_back(s);
        weights.push_back(h * rule.weights[i] * (damped ? std::exp(-s) : 1.0));
    }
}

}  // namespace

KernelEvaluator::KernelEvaluator(const KernelConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const double nu = cfg_.nu, T = cfg_.T;

    // Window [T-1, T]: everything the smoothed cutoff adds to the plain sine
    // integral, f(t) = nu (1 - eta) sin(nu t) + eta' cos(nu t).
    const GaussRule& wr = gauss_legendre(kWindowOrder);
    const int window_panels = std::max(1, static_cast<int>(std::ceil(nu / 2.0)));
    std::vector<double> w;
    for (int p = 0; p < window_panels; ++p)
        append_panel(window_t_, w, wr, T - 1.0 + double(p) / window_panels, T - 1.0 + double(p + 1) / window_panels,
                     false);
    window_wf_.resize(window_t_.size());
    for (std::size_t j = 0; j < window_t_.size(); ++j) {
        const double t = window_t_[j];
        const double s = t - T;
        window_wf_[j] =
            w[j] * (nu * (1.0 - cfg_.eta.value(s)) * std::sin(nu * t) + cfg_.eta.first(s) * std::cos(nu * t));
    }

    if (nu > 0.0) {
        const GaussRule& tr = gauss_legendre(kTailOrder);
        for (double a = 0.0; a < kTailEnd; a += kTailPanel)
            append_panel(tail_sigma_, tail_weight_, tr, a, a + kTailPanel, true);
        tail_phase_ = std::complex<double>(0.0, 1.0) * std::polar(1.0 / nu, nu * T);
    }
}

double KernelEvaluator::window(double x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < window_t_.size(); ++j) {
        const double t = window_t_[j];
        s += window_wf_[j] / std::sqrt((t - x) * (t + x));
    }
    return s;
}

// int_T^inf sin(nu t) / sqrt(t^2 - x^2) dt, rotated onto t = T + i sigma / nu
// where the integrand decays like exp(-sigma).
double KernelEvaluator::tail(double x) const {
    const double d = cfg_.nu * (cfg_.T - x);
    if (d < kTailPanel) return tail_graded(x, d);
    const double T = cfg_.T, inv_nu = 1.0 / cfg_.nu;
    std::complex<double> s{};
    for (std::size_t k = 0; k < tail_sigma_.size(); ++k) {
        const std::complex<double> z(T, tail_sigma_[k] * inv_nu);
        s += tail_weight_[k] / std::sqrt((z - x) * (z + x));
    }
    return (tail_phase_ * s).imag();
}

// Branch point sits at distance d from the start of the path: grade the
// panels geometrically from there.
double KernelEvaluator::tail_graded(double x, double d) const {
    std::vector<double> edges{0.0};
    for (double b = d; b < kTailPanel; b *= 2.0) edges.push_back(b);
    for (double b = edges.back() + kTailPanel; edges.back() < kTailEnd; b += kTailPanel) edges.push_back(b);
    const GaussRule& tr = gauss_legendre(kTailOrder);
    const double T = cfg_.T, inv_nu = 1.0 / cfg_.nu;
    std::vector<double> sig, wt;
    sig.reserve(edges.size() * kTailOrder);
    wt.reserve(edges.size() * kTailOrder);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) append_panel(sig, wt, tr, edges[p], edges[p + 1], true);
    std::complex<double> s{};
    for (std::size_t k = 0; k < sig.size(); ++k) {
        const std::complex<double> z(T, sig[k] * inv_nu);
        s += wt[k] / std::sqrt((z - x) * (z + x));
    }
    return (tail_phase_ * s).imag();
}

double KernelEvaluator::fast(double x) const {
    if (x == 0.0) return 0.0;
    const double nu = cfg_.nu;
    double g = -x * window(x);
    if (nu > 0.0) g += nu * x * (0.5 * std::numbers::pi * bessel_j0(nu * x) - tail(x));
    return g;
}

double KernelEvaluator::operator()(double x) const {
    if (on_fast_path(x)) return fast(x);
    return kernel_direct(cfg_, x);
}

double kernel_fast(const KernelConfig& cfg, double x) { return KernelEvaluator(cfg)(x); }

std::vector<double> kernel_batch(const KernelConfig& cfg, std::span<const double> xs) {
    const KernelEvaluator ev(cfg);
    std::vector<double> out(xs.size());
    std::map<std::size_t, std::string> errors;
    std::mutex mu;
    parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                out[i] = ev(xs[i]);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                errors.emplace(i, e.what());
            }
        }
    });
    if (!errors.empty()) {
        std::vector<std::size_t> failed;
        for (const auto& [i, msg] : errors) failed.push_back(i);
        throw BatchError(std::move(failed), errors.begin()->second);
    }
    return out;
}

}  // namespace apqho
