// qbm - decoherence curves, spectral densities, sweeps and validation from the command line.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numerical error (partial output kept, err_flag set).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qbm/output.hpp"
#include "qbm/runner.hpp"
#include "qbm/validation.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Options {
    std::string config;
    std::string out;
    std::optional<unsigned> workers;
    std::string level = "fast";
};

unsigned resolve_workers(const Options& o) { return o.workers ? *o.workers : qbm::default_workers(); }

int run_points(const Options& o, qbm::RunKind kind, bool force_directory) {
    const qbm::RunConfig cfg = qbm::RunConfig::load(o.config);
    // Resolve every point first so a bad value fails before any computation.
    for (std::size_t i = 0; i < cfg.size(); ++i) cfg.point(i);
    const unsigned workers = resolve_workers(o);
    std::string out = !o.out.empty() ? o.out : cfg.out;

    if (cfg.size() == 1 && !force_directory) {
        if (out.empty()) out = kind == qbm::RunKind::Spectra ? "spectra.csv" : "curve.csv";
        qbm::RunPoint p = cfg.point(0);
        p.kind = kind;
        const qbm::PointOutput r = qbm::render_point(p);
        try {
            qbm::write_atomic(out, r.csv);
        } catch (const std::exception& e) {
            std::cerr << "qbm: " << e.what() << "\n";
            return kConfigError;
        }
        if (r.numerical_failure) {
            std::cerr << "qbm: numerical error: " << r.message << "\n";
            return kNumericalError;
        }
        std::cout << "wrote " << out << "\n";
        return kOk;
    }

    if (out.empty()) out = force_directory ? "sweep_out" : (kind == qbm::RunKind::Spectra ? "spectra_out" : "curve_out");
    const qbm::RunKind* override_kind = force_directory ? nullptr : &kind;
    qbm::SweepSummary s;
    try {
        s = qbm::run_sweep(cfg, out, workers, override_kind);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "qbm: " << e.what() << "\n";
        return kConfigError;
    }
    std::size_t bad = 0;
    for (const auto& p : s.points)
        if (p.status != qbm::PointStatus::Ok) {
            ++bad;
            std::cerr << "qbm: point " << p.index << " (" << p.file << "): " << p.message << "\n";
        }
    std::cout << "wrote " << s.points.size() << " files and manifest.json to " << out << "\n";
    return bad ? kNumericalError : kOk;
}

int run_validate(const Options& o) {
    const qbm::ValidationLevel level = qbm::validation_level_from_string(o.level);
    const std::string out = o.out.empty() ? "validation_report.json" : o.out;
    const qbm::ValidationReport report = qbm::run_validation(level);
    try {
        qbm::write_atomic(out, report.to_json().dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "qbm: " << e.what() << "\n";
        return kConfigError;
    }

    std::ifstream in(out);
    const qbm::ValidationReport reread = qbm::ValidationReport::from_json(nlohmann::json::parse(in));
    const bool round_trip = reread == report;

    for (const auto& c : report.checks) {
        std::string label = c.criterion ? "criterion " + std::to_string(c.criterion) + ": " + c.name : c.name;
        std::printf("%-8s %s\n", qbm::to_string(c.status).c_str(), label.c_str());
    }
    if (!round_trip) std::printf("fail     report round-trip\n");
    std::printf("report written to %s\n", out.c_str());
    return report.passed() && round_trip ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoherence of a charged particle in a magnetic field coupled to a bath"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", o.config, "key=value configuration file");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output file or directory");
        sub->add_option("--workers", o.workers, "worker threads (default: QBM_WORKERS or hardware threads)")
            ->check(CLI::Range(1u, 4096u));
    };
    auto* curve = app.add_subcommand("curve", "decoherence curve(s) as CSV");
    add_common(curve, true);
    auto* spectra = app.add_subcommand("spectra", "spectral densities of the three cutoffs as CSV");
    add_common(spectra, true);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep: one CSV per point plus manifest.json");
    add_common(sweep, true);
    auto* validate = app.add_subcommand("validate", "run the oracle checks and acceptance criteria");
    add_common(validate, false);
    validate->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*curve) return run_points(o, qbm::RunKind::Curve, false);
        if (*spectra) return run_points(o, qbm::RunKind::Spectra, false);
        if (*sweep) return run_points(o, qbm::RunKind::Curve, true);
        if (*validate) return run_validate(o);
    } catch (const qbm::ConfigError& e) {
        std::cerr << "qbm: " << e.what() << "\n";
        return kConfigError;
    } catch (const qbm::Error& e) {
        std::cerr << "qbm: numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "qbm: " << e.what() << "\n";
        return kNumericalError;
    }
    return kConfigError;
}
