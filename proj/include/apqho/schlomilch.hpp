#pragma once

// Schlomilch transform g(x) = (2/pi) int_0^{pi/2} q_+(x sin th) dth and its
// Abel-type inverse on [0, T].

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "apqho/kernel.hpp"
#include "apqho/perturbation.hpp"

namespace apqho {

/// Schlomilch transform of a spec, term by term in the angle form. Cosine
/// terms use the equispaced rule on the period, which is exact up to
/// 2 J_{4M}(nu x) and M is chosen to push that below 1e-16; decay terms use
/// adaptive quadrature graded towards th = 0 where the bump sits.
cplx forward_transform(const PerturbationSpec& spec, double x, const QuadratureConfig& cfg = {});

/// Same transform for an arbitrary callable, symmetrised to its even part.
/// `omega` bounds the oscillation rate of f and seeds the panelling.
cplx forward_transform_fn(const std::function<cplx(double)>& f, double x, const QuadratureConfig& cfg = {},
                          double omega = 0.0);

/// Solution g(x) = -x int_x^T phi'(t) / sqrt(t^2 - x^2) dt of
/// phi(t) = (2/pi) int_t^T g(x) dx / sqrt(x^2 - t^2). Requires phi(T) = 0
/// (|phi(T)| <= 1e-12); otherwise the solution is unbounded near T and the
/// call is rejected with DomainError. `breakpoints` lists interior points
/// where phi' is less smooth.
double abel_invert(const std::function<double(double)>& phi, const std::function<double(double)>& phi_prime,
                   double T, double x, const QuadratureConfig& cfg = {}, std::span<const double> breakpoints = {},
                   double omega = 0.0);

/// General solution including the boundary term x phi(T) / sqrt(T^2 - x^2);
/// defined for 0 <= x < T.
double abel_invert_unconstrained(const std::function<double(double)>& phi,
                                 const std::function<double(double)>& phi_prime, double T, double x,
                                 const QuadratureConfig& cfg = {}, std::span<const double> breakpoints = {},
                                 double omega = 0.0);

struct RoundTrip {
    cplx kernel_side;   // int_0^T G(x, T) g_q(x) dx
    cplx cutoff_side;   // int_0^T q_+(t) phi(t) dt
    double residual = 0.0;
};

/// Both sides of the inversion identity for the kernel at (nu, T).
RoundTrip roundtrip(const PerturbationSpec& spec, double nu, double T, const QuadratureConfig& cfg = {});
double roundtrip_residual(const PerturbationSpec& spec, double nu, double T, const QuadratureConfig& cfg = {});

/// Weighted sup-norm audit of g and g' on a grid.
struct TransformAudit {
    std::vector<double> x;
    std::vector<cplx> g;
    std::vector<cplx> g_prime;        // central differences
    std::vector<double> weighted_g;   // |g(x)| sqrt(1 + x)
    std::vector<double> weighted_gp;  // |g'(x)| sqrt(1 + x)
    double sup_weighted_g = 0.0;
    double sup_weighted_gp = 0.0;
    double norm_q = 0.0;          // sup |q|
    double norm_q_prime = 0.0;    // sup |q'|
    double norm_primitive = 0.0;  // sup |Q|, +inf for a constant term
    /// sup_weighted_g / (|Q| + |q|) and sup_weighted_gp / (|q| + |q'|);
    /// zero when the denominator is infinite.
    double ratio_g = 0.0;
    double ratio_gp = 0.0;

    bool primitive_bounded() const noexcept;
};

TransformAudit transform_decay_audit(const PerturbationSpec& spec, std::span<const double> x_grid,
                            const QuadratureConfig& cfg = {});

/// CSV with header `x,re_g,im_g,weighted_abs_g`.
void write_audit_csv(std::ostream& out, const TransformAudit& audit);

}  // namespace apqho
