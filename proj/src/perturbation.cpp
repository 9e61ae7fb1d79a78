#include "apqho/perturbation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace apqho {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest |d/du 1/(1+u^2)| (at u = 1/sqrt 3) and |d/du exp(-u^2)| (u = 1/sqrt 2).
constexpr double kRationalSlope = 0.6495190528383290;
constexpr double kGaussSlope = 0.8577638849607068;

double decay_shape(DecayKind kind, double u) {
    return kind == DecayKind::rational ? 1.0 / (1.0 + u * u) : std::exp(-u * u);
}

double decay_shape_prime(DecayKind kind, double u) {
    if (kind == DecayKind::rational) {
        const double d = 1.0 + u * u;
        return -2.0 * u / (d * d);
    }
    return -2.0 * u * std::exp(-u * u);
}

double decay_shape_primitive(DecayKind kind, double u) {
    return kind == DecayKind::rational ? std::atan(u) : 0.5 * std::sqrt(std::numbers::pi) * std::erf(u);
}

bool same_frequency(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

PerturbationSpec::PerturbationSpec(std::vector<CosTerm> cos_terms, std::vector<DecayTerm> decay_terms)
    : cos_(std::move(cos_terms)), decay_(std::move(decay_terms)) {
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        const double nu = cos_[i].frequency;
        if (!std::isfinite(nu) || nu < 0.0) throw DomainError("cosine frequency must be finite and non-negative");
        for (std::size_t j = 0; j < i; ++j)
            if (cos_[j].frequency == nu) throw DomainError("duplicate cosine frequency " + std::to_string(nu));
    }
    for (const auto& d : decay_)
        if (!std::isfinite(d.scale) || !(d.scale > 0.0)) throw DomainError("decay scale must be positive");
}

bool PerturbationSpec::is_real() const noexcept {
    return std::all_of(cos_.begin(), cos_.end(), [](const CosTerm& c) { return c.amplitude.imag() == 0.0; }) &&
           std::all_of(decay_.begin(), decay_.end(), [](const DecayTerm& d) { return d.amplitude.imag() == 0.0; });
}

double PerturbationSpec::max_frequency() const noexcept {
    double m = 0.0;
    for (const auto& c : cos_) m = std::max(m, c.frequency);
    return m;
}

double PerturbationSpec::min_scale() const noexcept {
    double m = kInf;
    for (const auto& d : decay_) m = std::min(m, d.scale);
    return m;
}

PerturbationSpec PerturbationSpec::operator+(const PerturbationSpec& other) const {
    auto c = cos_;
    c.insert(c.end(), other.cos_.begin(), other.cos_.end());
    auto d = decay_;
    d.insert(d.end(), other.decay_.begin(), other.decay_.end());
    return PerturbationSpec(std::move(c), std::move(d));
}

PerturbationSpec PerturbationSpec::scaled(cplx factor) const {
    auto c = cos_;
    for (auto& t : c) t.amplitude *= factor;
    auto d = decay_;
    for (auto& t : d) t.amplitude *= factor;
    return PerturbationSpec(std::move(c), std::move(d));
}

cplx eval_decay(const PerturbationSpec& spec, double x) {
    cplx s{};
    for (const auto& d : spec.decay_terms()) s += d.amplitude * decay_shape(d.kind, x / d.scale);
    return s;
}

double eval_decay_abs(const PerturbationSpec& spec, double x) { return std::abs(eval_decay(spec, x)); }

cplx eval_q(const PerturbationSpec& spec, double x) {
    cplx s{};
    for (const auto& c : spec.cos_terms()) s += c.amplitude * std::cos(c.frequency * x);
    return s + eval_decay(spec, x);
}

cplx eval_q_prime(const PerturbationSpec& spec, double x) {
    cplx s{};
    for (const auto& c : spec.cos_terms()) s -= c.amplitude * (c.frequency * std::sin(c.frequency * x));
    for (const auto& d : spec.decay_terms()) s += d.amplitude * (decay_shape_prime(d.kind, x / d.scale) / d.scale);
    return s;
}

cplx eval_primitive_Q(const PerturbationSpec& spec, double x) {
    cplx s{};
    for (const auto& c : spec.cos_terms()) {
        if (c.frequency == 0.0)
            s += c.amplitude * x;
        else
            s += c.amplitude * (std::sin(c.frequency * x) / c.frequency);
    }
    for (const auto& d : spec.decay_terms()) s += d.amplitude * (d.scale * decay_shape_primitive(d.kind, x / d.scale));
    return s;
}

cplx bohr_coefficient(const PerturbationSpec& spec, double nu) {
    for (const auto& c : spec.cos_terms()) {
        if (!same_frequency(nu, c.frequency)) continue;
        return c.frequency == 0.0 ? c.amplitude : 0.5 * c.amplitude;
    }
    return {};
}

double besicovitch_seminorm_estimate(const PerturbationSpec& spec, double T, const QuadratureConfig& cfg) {
    if (!(T > 0.0)) throw DomainError("besicovitch_seminorm_estimate: T must be positive");
    if (spec.decay_terms().empty()) return 0.0;
    // |r| is even; grade the panels geometrically away from the bump at 0.
    std::vector<double> edges{0.0};
    for (double e = spec.min_scale(); e < T; e *= 4.0) edges.push_back(e);
    edges.push_back(T);
    auto f = [&](double x) { return eval_decay_abs(spec, x); };
    return integrate_partitioned(f, edges, cfg) / T;
}

double sup_q(const PerturbationSpec& spec) noexcept {
    double s = 0.0;
    for (const auto& c : spec.cos_terms()) s += std::abs(c.amplitude);
    for (const auto& d : spec.decay_terms()) s += std::abs(d.amplitude);
    return s;
}

double sup_q_prime(const PerturbationSpec& spec) noexcept {
    double s = 0.0;
    for (const auto& c : spec.cos_terms()) s += std::abs(c.amplitude) * c.frequency;
    for (const auto& d : spec.decay_terms())
        s += std::abs(d.amplitude) * (d.kind == DecayKind::rational ? kRationalSlope : kGaussSlope) / d.scale;
    return s;
}

double sup_primitive(const PerturbationSpec& spec) noexcept {
    double s = 0.0;
    for (const auto& c : spec.cos_terms()) {
        if (c.frequency == 0.0) {
            if (std::abs(c.amplitude) > 0.0) return kInf;
            continue;
        }
        s += std::abs(c.amplitude) / c.frequency;
    }
    for (const auto& d : spec.decay_terms())
        s += std::abs(d.amplitude) * d.scale *
             (d.kind == DecayKind::rational ? 0.5 * std::numbers::pi : 0.5 * std::sqrt(std::numbers::pi));
    return s;
}

namespace {

double parse_number(const std::string& tok, std::size_t line) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v)) throw ParseError(line, "not a finite number: '" + tok + "'");
    return v;
}

}  // namespace

PerturbationSpec parse_spec(std::istream& in) {
    std::vector<CosTerm> cos_terms;
    std::vector<DecayTerm> decay_terms;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() != 4) throw ParseError(line, "expected '<kind> <re> <im> <value>', got " + std::to_string(tok.size()) + " fields");
        const cplx amp{parse_number(tok[1], line), parse_number(tok[2], line)};
        const double value = parse_number(tok[3], line);
        if (tok[0] == "cos") {
            if (value < 0.0) throw ParseError(line, "negative frequency");
            for (const auto& c : cos_terms)
                if (c.frequency == value) throw ParseError(line, "duplicate frequency " + tok[3]);
            cos_terms.push_back({amp, value});
        } else if (tok[0] == "rational" || tok[0] == "gauss") {
            if (!(value > 0.0)) throw ParseError(line, "scale must be positive");
            decay_terms.push_back({tok[0] == "rational" ? DecayKind::rational : DecayKind::gaussian, amp, value});
        } else {
            throw ParseError(line, "unknown term kind '" + tok[0] + "'");
        }
    }
    return PerturbationSpec(std::move(cos_terms), std::move(decay_terms));
}

PerturbationSpec parse_spec_string(const std::string& text) {
    std::istringstream in(text);
    return parse_spec(in);
}

PerturbationSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open spec file " + path.string());
    return parse_spec(in);
}

std::string format_spec(const PerturbationSpec& spec) {
    std::string out;
    char buf[160];
    for (const auto& c : spec.cos_terms()) {
        std::snprintf(buf, sizeof buf, "cos %.17g %.17g %.17g\n", c.amplitude.real(), c.amplitude.imag(), c.frequency);
        out += buf;
    }
    for (const auto& d : spec.decay_terms()) {
        std::snprintf(buf, sizeof buf, "%s %.17g %.17g %.17g\n", d.kind == DecayKind::rational ? "rational" : "gauss",
                      d.amplitude.real(), d.amplitude.imag(), d.scale);
        out += buf;
    }
    return out;
}

}  // namespace apqho
