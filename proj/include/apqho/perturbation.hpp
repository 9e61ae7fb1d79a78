#pragma once

// Even perturbations q = p + r of the harmonic oscillator: p a finite cosine
// sum (the almost-periodic part), r a sum of decaying even bumps.

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "apqho/quadrature.hpp"

namespace apqho {

using cplx = std::complex<double>;

struct CosTerm {
    cplx amplitude;
    double frequency = 0.0;  // radians per unit x, >= 0
};

enum class DecayKind { rational, gaussian };

/// rational: c / (1 + (x/s)^2); gaussian: c exp(-(x/s)^2).
struct DecayTerm {
    DecayKind kind = DecayKind::rational;
    cplx amplitude;
    double scale = 1.0;
};

class PerturbationSpec {
public:
    PerturbationSpec() = default;
    /// Throws DomainError on negative/non-finite or duplicate frequencies and
    /// on non-positive scales.
    PerturbationSpec(std::vector<CosTerm> cos_terms, std::vector<DecayTerm> decay_terms);

    const std::vector<CosTerm>& cos_terms() const noexcept { return cos_; }
    const std::vector<DecayTerm>& decay_terms() const noexcept { return decay_; }

    bool empty() const noexcept { return cos_.empty() && decay_.empty(); }
    /// True when q takes real values on the real line.
    bool is_real() const noexcept;
    /// Largest cosine frequency (0 for none).
    double max_frequency() const noexcept;
    /// Smallest decay scale (+inf for none).
    double min_scale() const noexcept;

    /// Concatenation of the term lists (frequencies must stay distinct).
    PerturbationSpec operator+(const PerturbationSpec& other) const;
    PerturbationSpec scaled(cplx factor) const;

private:
    std::vector<CosTerm> cos_;
    std::vector<DecayTerm> decay_;
};

cplx eval_q(const PerturbationSpec& spec, double x);
cplx eval_q_prime(const PerturbationSpec& spec, double x);
/// Closed-form Q(x) = int_0^x q; Q(0) = 0.
cplx eval_primitive_Q(const PerturbationSpec& spec, double x);
/// The decaying remainder r alone.
cplx eval_decay(const PerturbationSpec& spec, double x);
double eval_decay_abs(const PerturbationSpec& spec, double x);

/// Mean value lim (1/T) int_0^T p(t) cos(nu t) dt.
cplx bohr_coefficient(const PerturbationSpec& spec, double nu);

/// (1/2T) int_{-T}^{T} |r(x)| dx by adaptive quadrature.
double besicovitch_seminorm_estimate(const PerturbationSpec& spec, double T, const QuadratureConfig& cfg = {});

/// Triangle-inequality bounds from the coefficients. sup_primitive is +inf
/// when a non-zero constant term makes Q grow linearly.
double sup_q(const PerturbationSpec& spec) noexcept;
double sup_q_prime(const PerturbationSpec& spec) noexcept;
double sup_primitive(const PerturbationSpec& spec) noexcept;

/// Spec file: one term per line, `cos re im nu`, `rational re im scale` or
/// `gauss re im scale`; `#` starts a comment line.
PerturbationSpec parse_spec(std::istream& in);
PerturbationSpec parse_spec_string(const std::string& text);
PerturbationSpec load_spec(const std::filesystem::path& path);
std::string format_spec(const PerturbationSpec& spec);

}  // namespace apqho
