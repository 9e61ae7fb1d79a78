#pragma once

// Adaptive Gauss-Legendre integration shared by every module.
//
// All routines sum in a fixed order (panels left to right, recursion results
// combined pairwise), so a given integrand always produces the same bits no
// matter how many threads the caller runs.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "apqho/errors.hpp"

namespace apqho {

struct QuadratureConfig {
    int base_panel_order = 16;         // Gauss-Legendre nodes per panel
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_subdivisions = 200000;
    double oscillatory_threshold = 1.0;  // initial panels per oscillation period

    void validate() const;
};

/// Nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule; the reference stays valid for the lifetime of the program.
const GaussRule& gauss_legendre(int order);

/// Panels needed to give `oscillatory_threshold` panels per period of a
/// phase advancing at rate `omega` across [a, b]. Never less than one.
int oscillation_panels(double omega, double a, double b, const QuadratureConfig& cfg);

template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace detail {

template <class V>
double magnitude(const V& v) {
    return std::abs(v);
}

template <class V>
[[noreturn]] void throw_quadrature(const V& best, double err) {
    if constexpr (std::is_same_v<V, std::complex<double>>)
        throw QuadratureError(best.real(), best.imag(), err);
    else
        throw QuadratureError(static_cast<double>(best), 0.0, err);
}

template <class V>
struct Panel {
    V value{};
    double mass = 0.0;  // sum |w_i f_i|, the scale of the rounding error
};

template <class V, class F>
Panel<V> gauss_panel(F& f, const GaussRule& rule, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V s{};
    double m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const V v = rule.weights[i] * f(c + h * rule.nodes[i]);
        s += v;
        m += magnitude(v);
    }
    return {h * s, std::abs(h) * m};
}

struct RefineState {
    int remaining;
    double err = 0.0;
    bool failed = false;
};

template <class V, class F>
V refine(F& f, const GaussRule& rule, double a, double b, V whole, double tol, int depth, RefineState& st,
         double parent_err = HUGE_VAL) {
    const double m = 0.5 * (a + b);
    const Panel<V> pl = gauss_panel<V>(f, rule, a, m);
    const Panel<V> pr = gauss_panel<V>(f, rule, m, b);
    const V left = pl.value, right = pr.value;
    const V both = left + right;
    const double err = magnitude(both - whole);
    const double mass = pl.mass + pr.mass;
    const double roundoff = 64.0 * 2.220446049250313e-16 * mass;
    // Bisection stopped paying off while the discrepancy is already at the
    // integrand's own noise level (large phases lose digits inside sin/cos).
    const bool stagnant = err <= 1e-10 * mass && err > 0.25 * parent_err;
    if (err <= tol || err <= roundoff || stagnant || !(err == err)) {
        st.err += err;
        return both;
    }
    if (depth >= 60 || st.remaining <= 0 || m <= a || m >= b) {
        st.failed = true;
        st.err += err;
        return both;
    }
    --st.remaining;
    const V l = refine(f, rule, a, m, left, 0.5 * tol, depth + 1, st, err);
    const V r = refine(f, rule, m, b, right, 0.5 * tol, depth + 1, st, err);
    return l + r;
}

}  // namespace detail

/// Adaptive integral of f over the union of [edges[i], edges[i+1]]. Each
/// interval starts with a share of `min_panels` proportional to its length;
/// panels are bisected until |halves - whole| meets
/// max(abs_tol, rel_tol * |estimate|), with the tolerance split by length.
template <class F>
auto integrate_partitioned(F&& f, std::span<const double> edges, const QuadratureConfig& cfg, int min_panels = 1)
    -> std::invoke_result_t<F&, double> {
    using V = std::invoke_result_t<F&, double>;
    if (edges.size() < 2) return V{};
    const double total = edges.back() - edges.front();
    if (!(total > 0.0)) return V{};
    const GaussRule& rule = gauss_legendre(cfg.base_panel_order);

    std::vector<double> cuts;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        if (!(b > a)) continue;
        const int k = std::max(1, static_cast<int>(std::ceil(min_panels * (b - a) / total - 1e-9)));
        for (int j = 0; j < k; ++j) cuts.push_back(a + (b - a) * j / k);
    }
    cuts.push_back(edges.back());

    const std::size_t panels = cuts.size() - 1;
    std::vector<V> coarse(panels);
    for (std::size_t i = 0; i < panels; ++i) coarse[i] = detail::gauss_panel<V>(f, rule, cuts[i], cuts[i + 1]).value;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::max(detail::magnitude(pairwise_sum<V>(coarse)), 1e-300));

    detail::RefineState st{cfg.max_subdivisions};
    std::vector<V> fine(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double share = tol * (cuts[i + 1] - cuts[i]) / total;
        fine[i] = detail::refine(f, rule, cuts[i], cuts[i + 1], coarse[i], share, 0, st);
    }
    const V result = pairwise_sum<V>(fine);
    if (st.failed && st.err > tol) detail::throw_quadrature(result, st.err);
    return result;
}

/// Adaptive Gauss-Legendre integral of f over [a, b].
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureConfig& cfg, int min_panels = 1)
    -> std::invoke_result_t<F&, double> {
    if (a > b) throw DomainError("integrate: lower limit exceeds upper limit");
    const double edges[2] = {a, b};
    return integrate_partitioned(f, std::span<const double>(edges, 2), cfg, min_panels);
}

/// Integral of h(t) / sqrt(t^2 - x^2) over [a, b] with x <= a <= b.
///
/// With s = sqrt(t^2 - x^2) the integrand becomes h(t(s)) / t(s) ds, which is
/// as smooth as h, so no weighted rule is required. `omega` is an optional
/// bound on the oscillation rate of h and only seeds the initial panelling.
template <class H>
auto integrate_sqrt_singular(H&& h, double x, double a, double b, const QuadratureConfig& cfg, double omega = 0.0)
    -> std::invoke_result_t<H&, double> {
    if (x < 0.0) throw DomainError("integrate_sqrt_singular: x must be non-negative");
    if (a < x || b < a) throw DomainError("integrate_sqrt_singular: need x <= a <= b");
    const double sa = std::sqrt((a - x) * (a + x));
    const double sb = std::sqrt((b - x) * (b + x));
    const double x2 = x * x;
    auto g = [&](double s) {
        const double t = std::sqrt(s * s + x2);
        return h(t) / t;
    };
    return integrate(g, sa, sb, cfg, oscillation_panels(omega, sa, sb, cfg));
}

template <class H>
auto integrate_sqrt_singular(H&& h, double x, double b, const QuadratureConfig& cfg, double omega = 0.0) {
    return integrate_sqrt_singular(h, x, x, b, cfg, omega);
}

/// Integral of w(t) sin(nu t) over [a, b] with the range cut into
/// `oscillatory_threshold` panels per period before adaptive refinement.
template <class W>
double integrate_oscillatory_sin(W&& w, double nu, double a, double b, const QuadratureConfig& cfg) {
    if (!(nu > 0.0)) throw DomainError("integrate_oscillatory_sin: frequency must be positive");
    auto f = [&](double t) { return static_cast<double>(w(t)) * std::sin(nu * t); };
    return integrate(f, a, b, cfg, oscillation_panels(nu, a, b, cfg));
}

}  // namespace apqho
