#include "apqho/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace apqho {

void QuadratureConfig::validate() const {
    if (base_panel_order < 4) throw ConfigError("base_panel_order must be at least 4");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw ConfigError("max_subdivisions must be at least 1");
    if (!(oscillatory_threshold > 0.0)) throw ConfigError("oscillatory_threshold must be positive");
}

namespace {

// Newton iteration on the three-term recurrence, Tricomi initial guesses.
GaussRule build_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw ConfigError("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussRule>(build_rule(order));
    return *slot;
}

int oscillation_panels(double omega, double a, double b, const QuadratureConfig& cfg) {
    if (!(omega > 0.0) || !(b > a)) return 1;
    const double periods = omega * (b - a) / (2.0 * std::numbers::pi);
    const double panels = std::ceil(periods * cfg.oscillatory_threshold);
    return panels < 1.0 ? 1 : static_cast<int>(std::min(panels, 1e7));
}

}  // namespace apqho
