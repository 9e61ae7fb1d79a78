// apqho: command-line front end for spectra generation, recovery, scans and
// validation suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apqho/errors.hpp"
#include "apqho/kernel.hpp"
#include "apqho/manifest.hpp"
#include "apqho/parallel.hpp"
#include "apqho/perturbation.hpp"
#include "apqho/recovery.hpp"
#include "apqho/schlomilch.hpp"
#include "apqho/spectrum.hpp"
#include "apqho/validation.hpp"

namespace fs = std::filesystem;
using namespace apqho;

namespace {

enum Exit { ok = 0, validation_failed = 1, usage = 2, numeric = 3 };

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

SpectrumSeries load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    try {
        return read_series_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
}

std::string csv_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finish(RunManifest m, const std::vector<std::string>& args) {
    m.version = library_version();
    m.timestamp = utc_timestamp();
    m.arguments = args;
    for (const auto& out : m.outputs) write_manifest(manifest_path_for(out), m);
}

struct GenerateArgs {
    std::string spec, out, source = "asymptotic";
    long from = 0, to = 100;
    double sigma = 0.0, beta = 0.3, step = 0.0025;
    std::uint64_t seed = 0;
    int order = 2;
    bool no_richardson = false;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& args) {
    const PerturbationSpec spec = load_spec(a.spec);
    SpectrumSeries series;
    if (a.source == "asymptotic") {
        series = asymptotic_corrections(spec, a.from, a.to);
    } else {
        if (a.to > kEigenLevelCap)
            throw ConfigError("--to " + std::to_string(a.to) + " exceeds the eigensolver cap of " +
                              std::to_string(kEigenLevelCap) +
                              ": finite-difference error at higher levels is no longer small against the "
                              "n^{-1/4} corrections being measured; use --source asymptotic");
        if (a.from > a.to) throw ConfigError("--from must not exceed --to");
        auto cfg = EigenSolverConfig::for_levels(static_cast<int>(a.to), a.step, a.order);
        cfg.richardson = !a.no_richardson;
        series = delta_mu_from_eigenvalues(eigenvalues_direct(spec, cfg), a.from);
    }
    if (a.sigma != 0.0) series = inject_admissible_noise(series, a.sigma, a.beta, a.seed);
    auto out = open_out(a.out);
    write_series_csv(out, series);
    out.close();

    RunManifest m;
    m.subcommand = "generate";
    m.inputs = {a.spec};
    m.outputs = {a.out};
    m.seed = a.seed;
    m.parameters = {{"source", a.source}, {"n_from", a.from},      {"n_to", a.to},
                    {"noise_sigma", a.sigma}, {"noise_beta", a.beta}, {"step", a.step},
                    {"stencil_order", a.order}, {"richardson", !a.no_richardson}};
    finish(m, args);
    std::cout << "wrote " << series.size() << " rows to " << a.out << '\n';
    return ok;
}

struct RecoverArgs {
    std::string series, out;
    double nu = 0.0, envelope = 2.0;
    std::vector<double> T;
    long first = -1;
    bool accelerate = false;
};

int cmd_recover(const RecoverArgs& a, const std::vector<std::string>& args) {
    const SpectrumSeries series = load_series(a.series);
    RecoveryOptions opts;
    opts.first_index = a.first;
    opts.envelope_constant = a.envelope;
    opts.accelerate = a.accelerate;
    const RecoveryResult r = recover_limit(series, a.nu, a.T, opts);
    auto out = open_out(a.out);
    write_recovery_csv(out, r);
    out.close();

    RunManifest m;
    m.subcommand = "recover";
    m.inputs = {a.series};
    m.outputs = {a.out};
    m.parameters = {{"nu", a.nu}, {"T_schedule", a.T}, {"first_index", a.first},
                    {"envelope_constant", a.envelope}, {"accelerate", a.accelerate}};
    finish(m, args);
    std::printf("nu=%.6g final=%.10g%+.10gi flag=%s\n", a.nu, r.final_value.real(), r.final_value.imag(),
                to_string(r.convergence_flag));
    return ok;
}

struct ScanArgs {
    std::string series, out, peaks;
    double nu_min = 0.0, nu_max = 3.0, nu_step = 0.05, T = 100.0, threshold = 0.2, min_sep = -1.0;
};

int cmd_scan(const ScanArgs& a, const std::vector<std::string>& args) {
    const SpectrumSeries series = load_series(a.series);
    ScanOptions opts;
    opts.threshold = a.threshold;
    opts.min_separation = a.min_sep;
    const ScanResult s = frequency_scan(series, a.nu_min, a.nu_max, a.nu_step, a.T, opts);
    auto out = open_out(a.out);
    write_scan_csv(out, s);
    out.close();

    RunManifest m;
    m.subcommand = "scan";
    m.inputs = {a.series};
    m.outputs = {a.out};
    if (!a.peaks.empty()) {
        auto pk = open_out(a.peaks);
        pk << "nu,re_value,im_value\n";
        for (const auto& p : s.detected_peaks)
            pk << csv_cell(p.nu) << ',' << csv_cell(p.value.real()) << ',' << csv_cell(p.value.imag()) << '\n';
        m.outputs.push_back(a.peaks);
    }
    m.parameters = {{"nu_min", a.nu_min}, {"nu_max", a.nu_max},       {"nu_step", a.nu_step},
                    {"T", a.T},           {"threshold", a.threshold}, {"min_separation", a.min_sep}};
    finish(m, args);
    std::printf("T=%.6g L=%ld peaks=%zu\n", s.T, s.L, s.detected_peaks.size());
    for (const auto& p : s.detected_peaks)
        std::printf("  nu=%-10.6g value=%.8g%+.8gi\n", p.nu, p.value.real(), p.value.imag());
    for (const auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return ok;
}

struct ValidateArgs {
    std::vector<std::string> suites;
    std::string dump_dir;
    bool always_dump = false;
};

int cmd_validate(const ValidateArgs& a) {
    std::vector<std::string> names = a.suites;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) names = suite_names();
    bool all_pass = true;
    for (const auto& name : names) {
        const SuiteReport rep = run_suite(name);
        std::cout << rep.summary();
        const bool pass = rep.passed();
        all_pass = all_pass && pass;
        if (!pass || a.always_dump) {
            const fs::path dir = a.dump_dir.empty() ? fs::path(".") : fs::path(a.dump_dir);
            fs::create_directories(dir);
            const fs::path file = dir / (name + ".csv");
            auto out = open_out(file.string());
            out << rep.diagnostic_csv;
            std::cout << "  samples written to " << file.string() << '\n';
        }
    }
    return all_pass ? ok : validation_failed;
}

struct KernelDumpArgs {
    std::string out;
    double nu = 1.0, T = 50.0, x_min = 0.0, x_max = -1.0;
    long points = 1001;
    bool lattice = false;
};

int cmd_kernel_dump(const KernelDumpArgs& a, const std::vector<std::string>& args) {
    KernelConfig kc;
    kc.nu = a.nu;
    kc.T = a.T;
    std::vector<double> xs;
    if (a.lattice) {
        const long L = lattice_index_for(a.T);
        kc.T = lattice_point(L);
        for (long n = 0; n <= L; ++n) xs.push_back(lattice_point(n));
    } else {
        const double hi = a.x_max < 0 ? a.T : a.x_max;
        if (a.points < 2 || !(a.x_min >= 0.0) || !(hi > a.x_min) || hi > a.T)
            throw ConfigError("need 0 <= x_min < x_max <= T and at least 2 points");
        for (long i = 0; i < a.points; ++i)
            xs.push_back(a.x_min + (hi - a.x_min) * static_cast<double>(i) / static_cast<double>(a.points - 1));
    }
    const auto G = kernel_batch(kc, xs);
    auto out = open_out(a.out);
    out << "x,G\n";
    for (std::size_t i = 0; i < xs.size(); ++i) out << csv_cell(xs[i]) << ',' << csv_cell(G[i]) << '\n';
    out.close();

    RunManifest m;
    m.subcommand = "kernel-dump";
    m.outputs = {a.out};
    m.parameters = {{"nu", a.nu}, {"T", kc.T}, {"x_min", a.x_min}, {"x_max", a.x_max},
                    {"points", a.points}, {"lattice", a.lattice}};
    finish(m, args);
    std::cout << "wrote " << xs.size() << " kernel values to " << a.out << '\n';
    return ok;
}

struct GridArgs {
    std::string spec, out;
    double x_min = 0.0, x_max = 50.0;
    long points = 501;

    std::vector<double> grid() const {
        if (points < 2 || !(x_min >= 0.0) || !(x_max > x_min)) throw ConfigError("need 0 <= x_min < x_max, points >= 2");
        std::vector<double> xs(static_cast<std::size_t>(points));
        for (long i = 0; i < points; ++i)
            xs[static_cast<std::size_t>(i)] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(points - 1);
        return xs;
    }
};

int cmd_forward(const GridArgs& a, const std::vector<std::string>& args) {
    const PerturbationSpec spec = load_spec(a.spec);
    const auto xs = a.grid();
    std::vector<cplx> g(xs.size());
    parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) g[i] = forward_transform(spec, xs[i]);
    });
    auto out = open_out(a.out);
    out << "x,re_g,im_g\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << csv_cell(xs[i]) << ',' << csv_cell(g[i].real()) << ',' << csv_cell(g[i].imag()) << '\n';
    out.close();
    RunManifest m;
    m.subcommand = "forward";
    m.inputs = {a.spec};
    m.outputs = {a.out};
    m.parameters = {{"x_min", a.x_min}, {"x_max", a.x_max}, {"points", a.points}};
    finish(m, args);
    return ok;
}

int cmd_audit(const GridArgs& a, const std::vector<std::string>& args) {
    const PerturbationSpec spec = load_spec(a.spec);
    const TransformAudit audit = transform_decay_audit(spec, a.grid());
    auto out = open_out(a.out);
    write_audit_csv(out, audit);
    out.close();
    RunManifest m;
    m.subcommand = "audit";
    m.inputs = {a.spec};
    m.outputs = {a.out};
    m.parameters = {{"x_min", a.x_min}, {"x_max", a.x_max}, {"points", a.points}};
    finish(m, args);
    std::printf("sup |g| sqrt(1+x) = %.6g  ratio = %.6g\n", audit.sup_weighted_g, audit.ratio_g);
    std::printf("sup |g'| sqrt(1+x) = %.6g  ratio = %.6g\n", audit.sup_weighted_gp, audit.ratio_gp);
    if (!audit.primitive_bounded()) std::printf("primitive unbounded (constant term): g ratio not defined\n");
    return ok;
}

int run(std::vector<std::string> argv);

int cmd_rerun(const std::string& manifest) {
    const RunManifest m = read_manifest(manifest);
    std::vector<std::string> argv{"apqho", m.subcommand};
    argv.insert(argv.end(), m.arguments.begin(), m.arguments.end());
    return run(argv);
}

int run(std::vector<std::string> argv) {
    CLI::App app{"Spectral recovery tools for the perturbed harmonic oscillator", "apqho"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());
    int workers = 0;
    app.add_option("-j,--workers", workers, "worker threads (default: APQHO_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "write a spectral correction series");
    gen->add_option("--spec", ga.spec, "perturbation spec file")->required()->check(CLI::ExistingFile);
    gen->add_option("--from", ga.from, "first level")->check(CLI::NonNegativeNumber);
    gen->add_option("--to", ga.to, "last level")->check(CLI::NonNegativeNumber);
    gen->add_option("--source", ga.source, "asymptotic or eigensolver")
        ->check(CLI::IsMember({"asymptotic", "eigensolver"}));
    gen->add_option("--noise-sigma", ga.sigma, "noise amplitude");
    gen->add_option("--noise-beta", ga.beta, "noise decay exponent (> 0.25)");
    gen->add_option("--seed", ga.seed, "noise seed");
    gen->add_option("--step", ga.step, "eigensolver grid step");
    gen->add_option("--order", ga.order, "eigensolver stencil order")->check(CLI::IsMember({2, 4}));
    gen->add_flag("--no-richardson", ga.no_richardson, "skip the two-grid extrapolation");
    gen->add_option("-o,--out", ga.out, "output CSV")->required();

    RecoverArgs ra;
    auto* rec = app.add_subcommand("recover", "lattice sums along a schedule of T");
    rec->add_option("--series", ra.series, "series CSV")->required()->check(CLI::ExistingFile);
    rec->add_option("--nu", ra.nu, "frequency")->required()->check(CLI::NonNegativeNumber);
    rec->add_option("--T", ra.T, "ascending averaging lengths")->required()->delimiter(',');
    rec->add_option("--first", ra.first, "first lattice index (default: series start)");
    rec->add_option("--envelope", ra.envelope, "convergence envelope constant");
    rec->add_flag("--accelerate", ra.accelerate, "extrapolate the last two estimates assuming c/T error");
    rec->add_option("-o,--out", ra.out, "output CSV")->required();

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "lattice sums over a frequency grid at fixed T");
    scan->add_option("--series", sa.series, "series CSV")->required()->check(CLI::ExistingFile);
    scan->add_option("--nu-min", sa.nu_min);
    scan->add_option("--nu-max", sa.nu_max);
    scan->add_option("--nu-step", sa.nu_step);
    scan->add_option("--T", sa.T)->required();
    scan->add_option("--threshold", sa.threshold, "peak threshold relative to the largest modulus");
    scan->add_option("--min-separation", sa.min_sep, "minimum peak spacing (default 2 * nu-step)");
    scan->add_option("--peaks", sa.peaks, "peak table CSV");
    scan->add_option("-o,--out", sa.out, "output CSV")->required();

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "run property suites");
    val->add_option("suites", va.suites, "suite names or 'all'");
    val->add_option("--dump-dir", va.dump_dir, "directory for sample CSVs of failing suites");
    val->add_flag("--always-dump", va.always_dump, "write sample CSVs for passing suites too");

    KernelDumpArgs ka;
    auto* kd = app.add_subcommand("kernel-dump", "tabulate the recovery kernel");
    kd->add_option("--nu", ka.nu)->check(CLI::NonNegativeNumber);
    kd->add_option("--T", ka.T);
    kd->add_option("--x-min", ka.x_min);
    kd->add_option("--x-max", ka.x_max, "default T");
    kd->add_option("--points", ka.points);
    kd->add_flag("--lattice", ka.lattice, "use the points sqrt(2n+1) up to T (snapped)");
    kd->add_option("-o,--out", ka.out, "output CSV")->required();

    GridArgs fa;
    auto* fwd = app.add_subcommand("forward", "tabulate the Schlomilch transform of a spec");
    fwd->add_option("--spec", fa.spec)->required()->check(CLI::ExistingFile);
    fwd->add_option("--x-min", fa.x_min);
    fwd->add_option("--x-max", fa.x_max);
    fwd->add_option("--points", fa.points);
    fwd->add_option("-o,--out", fa.out)->required();

    GridArgs aa;
    aa.x_min = 1.0, aa.x_max = 400.0, aa.points = 1597;
    auto* aud = app.add_subcommand("audit", "weighted sup-norm audit of a spec's transform");
    aud->add_option("--spec", aa.spec)->required()->check(CLI::ExistingFile);
    aud->add_option("--x-min", aa.x_min);
    aud->add_option("--x-max", aa.x_max);
    aud->add_option("--points", aa.points);
    aud->add_option("-o,--out", aa.out)->required();

    std::string manifest;
    auto* rerun = app.add_subcommand("rerun", "replay the run recorded in a manifest");
    rerun->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);

    std::vector<std::string> rev(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (workers > 0) set_worker_count(workers);

    // Arguments after the subcommand name, kept for replay.
    std::vector<std::string> sub_args;
    for (std::size_t i = 1; i < argv.size(); ++i)
        if (argv[i] == app.get_subcommands().front()->get_name()) {
            sub_args.assign(argv.begin() + static_cast<long>(i) + 1, argv.end());
            break;
        }

    try {
        if (*gen) return cmd_generate(ga, sub_args);
        if (*rec) return cmd_recover(ra, sub_args);
        if (*scan) return cmd_scan(sa, sub_args);
        if (*val) return cmd_validate(va);
        if (*kd) return cmd_kernel_dump(ka, sub_args);
        if (*fwd) return cmd_forward(fa, sub_args);
        if (*aud) return cmd_audit(aa, sub_args);
        if (*rerun) return cmd_rerun(manifest);
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }
