#pragma once

// Property suites run by `apqho validate`. Each suite measures a handful of
// constants, compares them against pinned limits and keeps the raw samples
// as a CSV for inspection.

#include <string>
#include <string_view>
#include <vector>

#include "apqho/perturbation.hpp"

namespace apqho {

enum class Relation { at_most, at_least, within };

struct Measurement {
    std::string name;
    double value = 0.0;
    Relation relation = Relation::at_most;
    double limit = 0.0;
    double limit_hi = 0.0;  // upper end for Relation::within
    bool informational = false;  // reported, never fails the suite

    bool pass() const noexcept;
};

struct SuiteReport {
    std::string suite;
    std::vector<Measurement> measurements;
    std::string diagnostic_csv;
    double seconds = 0.0;

    bool passed() const noexcept;
    /// One line per measurement plus a verdict line.
    std::string summary() const;
};

const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite name.
SuiteReport run_suite(std::string_view name);

SuiteReport suite_bessel();
SuiteReport suite_roundtrip();
SuiteReport suite_transform_bounds();
SuiteReport suite_kernel_bounds();
SuiteReport suite_riemann_rate();
SuiteReport suite_eigen_unperturbed();
SuiteReport suite_hard_cutoff();

/// Perturbations used by the bound audits: mixed cosine sums and decaying
/// bumps, none with a constant term.
std::vector<PerturbationSpec> audit_corpus();

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace apqho
