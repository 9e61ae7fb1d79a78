#include "apqho/schlomilch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "apqho/parallel.hpp"

namespace apqho {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// (2/pi) int_0^{pi/2} cos(z sin th) dth by the trapezoidal rule on M
// intervals. The integrand is even and pi-periodic, so the only error is
// 2 (J_{4M}(z) + J_{8M}(z) + ...), negligible once 4M > z + 10 z^{1/3} + 25.
double angular_mean_cos(double z) {
    z = std::abs(z);
    const int m = std::max(2, static_cast<int>(std::ceil((z + 10.0 * std::cbrt(z) + 25.0) / 4.0)));
    const double step = kHalfPi / m;
    double s = 0.5 * (1.0 + std::cos(z));
    for (int k = 1; k < m; ++k) s += std::cos(z * std::sin(k * step));
    return s / m;
}

double decay_shape(DecayKind kind, double u) {
    return kind == DecayKind::rational ? 1.0 / (1.0 + u * u) : std::exp(-u * u);
}

double angular_mean_decay(const DecayTerm& d, double x, const QuadratureConfig& cfg) {
    x = std::abs(x);
    if (x == 0.0) return 1.0;
    std::vector<double> edges{0.0};
    for (double r = d.scale / x; r < 1.0; r *= 4.0) edges.push_back(std::asin(r));
    edges.push_back(kHalfPi);
    auto f = [&](double th) { return decay_shape(d.kind, x * std::sin(th) / d.scale); };
    return integrate_partitioned(f, edges, cfg) / kHalfPi;
}

void require_below_T(double T, double x) {
    if (!(T > 2.0)) throw DomainError("Abel inversion needs T > 2");
    if (!(x >= 0.0) || x > T) throw DomainError("Abel inversion: x must lie in [0, T]");
}

double singular_part(const std::function<double(double)>& phi_prime, double T, double x, const QuadratureConfig& cfg,
                     std::span<const double> breakpoints, double omega) {
    std::vector<double> edges{x};
    for (double b : breakpoints)
        if (b > x && b < T) edges.push_back(b);
    std::sort(edges.begin() + 1, edges.end());
    edges.push_back(T);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        s += integrate_sqrt_singular(phi_prime, x, edges[i], edges[i + 1], cfg, omega);
    return s;
}

}  // namespace

cplx forward_transform(const PerturbationSpec& spec, double x, const QuadratureConfig& cfg) {
    cplx g{};
    for (const auto& c : spec.cos_terms()) g += c.amplitude * angular_mean_cos(c.frequency * x);
    for (const auto& d : spec.decay_terms()) g += d.amplitude * angular_mean_decay(d, x, cfg);
    return g;
}

cplx forward_transform_fn(const std::function<cplx(double)>& f, double x, const QuadratureConfig& cfg, double omega) {
    auto even = [&](double th) {
        const double u = x * std::sin(th);
        return 0.5 * (f(u) + f(-u));
    };
    const int panels = oscillation_panels(omega * std::abs(x), 0.0, kHalfPi, cfg);
    return integrate(even, 0.0, kHalfPi, cfg, panels) / kHalfPi;
}

double abel_invert(const std::function<double(double)>& phi, const std::function<double(double)>& phi_prime,
                   double T, double x, const QuadratureConfig& cfg, std::span<const double> breakpoints,
                   double omega) {
    require_below_T(T, x);
    const double end = phi(T);
    if (std::abs(end) > 1e-12)
        throw DomainError("abel_invert: phi(T) = " + std::to_string(end) +
                          " != 0; the boundary term phi(T)/sqrt(T^2-x^2) makes the solution unbounded near T");
    if (x == T || x == 0.0) return 0.0;
    return -x * singular_part(phi_prime, T, x, cfg, breakpoints, omega);
}

double abel_invert_unconstrained(const std::function<double(double)>& phi,
                                 const std::function<double(double)>& phi_prime, double T, double x,
                                 const QuadratureConfig& cfg, std::span<const double> breakpoints, double omega) {
    require_below_T(T, x);
    if (x == T) throw DomainError("abel_invert_unconstrained: solution is singular at x = T");
    if (x == 0.0) return 0.0;
    const double boundary = x * phi(T) / std::sqrt((T - x) * (T + x));
    return boundary - x * singular_part(phi_prime, T, x, cfg, breakpoints, omega);
}

RoundTrip roundtrip(const PerturbationSpec& spec, double nu, double T, const QuadratureConfig& cfg) {
    KernelConfig kc;
    kc.nu = nu;
    kc.T = T;
    kc.quad = cfg;
    const KernelEvaluator kernel(kc);

    const double rate = nu + spec.max_frequency();
    const int panels = oscillation_panels(rate, 0.0, T, cfg);

    auto lhs_integrand = [&](double x) { return kernel(x) * forward_transform(spec, x, cfg); };
    const double lhs_edges[] = {0.0, T - 2.0, T - 1.0, T};
    auto rhs_integrand = [&](double t) { return eval_q(spec, t) * cutoff_cosine(kc, t); };
    const double rhs_edges[] = {0.0, T - 1.0, T};

    RoundTrip r;
    if (spec.empty()) return r;
    r.kernel_side = integrate_partitioned(lhs_integrand, lhs_edges, cfg, panels);
    r.cutoff_side = integrate_partitioned(rhs_integrand, rhs_edges, cfg, panels);
    r.residual = std::abs(r.kernel_side - r.cutoff_side);
    return r;
}

double roundtrip_residual(const PerturbationSpec& spec, double nu, double T, const QuadratureConfig& cfg) {
    return roundtrip(spec, nu, T, cfg).residual;
}

bool TransformAudit::primitive_bounded() const noexcept { return std::isfinite(norm_primitive); }

TransformAudit transform_decay_audit(const PerturbationSpec& spec, std::span<const double> x_grid, const QuadratureConfig& cfg) {
    constexpr double kStep = 1e-3;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] >= 0.0)) throw DomainError("transform_decay_audit: grid must lie in [0, inf)");
        if (i > 0 && !(x_grid[i] > x_grid[i - 1])) throw DomainError("transform_decay_audit: grid must be ascending");
    }
    TransformAudit a;
    const std::size_t n = x_grid.size();
    a.x.assign(x_grid.begin(), x_grid.end());
    a.g.resize(n);
    a.g_prime.resize(n);
    a.weighted_g.resize(n);
    a.weighted_gp.resize(n);
    parallel_for(
        n,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = a.x[i];
                a.g[i] = forward_transform(spec, x, cfg);
                a.g_prime[i] =
                    (forward_transform(spec, x + kStep, cfg) - forward_transform(spec, x - kStep, cfg)) / (2.0 * kStep);
                const double w = std::sqrt(1.0 + x);
                a.weighted_g[i] = std::abs(a.g[i]) * w;
                a.weighted_gp[i] = std::abs(a.g_prime[i]) * w;
            }
        },
        8);
    for (std::size_t i = 0; i < n; ++i) {
        a.sup_weighted_g = std::max(a.sup_weighted_g, a.weighted_g[i]);
        a.sup_weighted_gp = std::max(a.sup_weighted_gp, a.weighted_gp[i]);
    }
    a.norm_q = sup_q(spec);
    a.norm_q_prime = sup_q_prime(spec);
    a.norm_primitive = sup_primitive(spec);
    const double dg = a.norm_primitive + a.norm_q;
    const double dgp = a.norm_q + a.norm_q_prime;
    a.ratio_g = (std::isfinite(dg) && dg > 0.0) ? a.sup_weighted_g / dg : 0.0;
    a.ratio_gp = dgp > 0.0 ? a.sup_weighted_gp / dgp : 0.0;
    return a;
}

void write_audit_csv(std::ostream& out, const TransformAudit& audit) {
    out << "x,re_g,im_g,weighted_abs_g\n";
    char buf[128];
    for (std::size_t i = 0; i < audit.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", audit.x[i], audit.g[i].real(), audit.g[i].imag(),
                      audit.weighted_g[i]);
        out << buf;
    }
}

}  // namespace apqho
