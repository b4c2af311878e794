#include <doctest.h>

#include <charconv>
#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qbm/config.hpp"
#include "qbm/output.hpp"
#include "qbm/runner.hpp"
#include "qbm/validation.hpp"

using namespace qbm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("qbm_unit_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("single point parse") {
    const RunConfig c = RunConfig::parse(
        "# comment\nomega0 = 3\nomega_c=0.5\ncutoff = dl\ns = 1.5\nlambda=40\nregime=exact\nomega_th=2\n"
        "dx=0.5\ndy=-1\nt_max=2\npoints=11\ngrid=linear\nout=x.csv\n");
    REQUIRE(c.size() == 1);
    CHECK(c.sweep_axes().empty());
    CHECK(c.out == "x.csv");
    const RunPoint p = c.point(0);
    CHECK(p.sys.omega0 == 3.0);
    CHECK(p.sd.cutoff == Cutoff::DrudeLorentz);
    CHECK(p.sd.s == 1.5);
    CHECK(p.regime.kind == Regime::Exact);
    CHECK(p.sep.dy == -1.0);
    const auto g = p.grid.build(p.sd);
    CHECK(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
}

TEST_CASE("repeated keys form a cross product, last axis fastest") {
    const RunConfig c = RunConfig::parse("omega0=1\nomega0=2\nomega0=3\ncutoff=exp\ncutoff=abrupt\nt_max=1\n");
    CHECK(c.size() == 6);
    REQUIRE(c.sweep_axes().size() == 2);
    CHECK(c.sweep_axes()[0] == "omega0");
    CHECK(c.point(0).sd.cutoff == Cutoff::Exponential);
    CHECK(c.point(1).sd.cutoff == Cutoff::Abrupt);
    CHECK(c.point(1).sys.omega0 == 1.0);
    CHECK(c.point(2).sys.omega0 == 2.0);
    CHECK(c.point(5).assignment.size() == 2);
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(RunConfig::parse("bogus=1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("omega0=\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("omega0=abc\n").point(0), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("out=a\nout=b\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("s=-1\n").point(0), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("omega0=0\nomega_c=0\n").point(0), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("t_min=1\n").point(0), ConfigError);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/qbm.cfg"), ConfigError);
}

TEST_CASE("sweep cap") {
    std::string text;
    for (int i = 0; i < 101; ++i) text += "omega0=" + std::to_string(1 + i) + "\n";
    for (int i = 0; i < 100; ++i) text += "lambda=" + std::to_string(100 + i) + "\n";
    CHECK_THROWS_AS(RunConfig::parse(text), ConfigError);
    CHECK_NOTHROW(RunConfig::parse(text + "sweep_cap=20000\n"));
}

}  // TEST_SUITE

TEST_SUITE("output") {

TEST_CASE("numbers round trip and ignore the locale") {
    std::setlocale(LC_ALL, "");
    for (const char* loc : {"de_DE.UTF-8", "fr_FR.UTF-8", "C.UTF-8"})
        if (std::setlocale(LC_NUMERIC, loc)) break;
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(rng), ex(rng));
        const std::string s = format_real(v);
        CHECK(s.find(',') == std::string::npos);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    std::setlocale(LC_ALL, "C");
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(-0.0) == "0");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("curve and spectra CSV layout") {
    CurveSeries c;
    c.times = {0.0, 1.0};
    c.magnitude = {1.0, std::numeric_limits<double>::quiet_NaN()};
    c.phase = {0.0, 0.0};
    c.log_magnitude = {0.0, 0.0};
    c.lambda1 = {cplx{}, cplx{}};
    c.lambda2 = {cplx{}, cplx{}};
    c.method = {"quadrature", "quadrature"};
    c.failed = {false, true};
    c.clamped = {false, false};
    c.message = {"", "x"};
    const std::string csv = curve_csv(c);
    CHECK(csv.rfind(std::string(kCurveHeader) + "\n", 0) == 0);
    CHECK(csv.find("\n0,1,0,0,0,0,0,quadrature,0\n") != std::string::npos);
    CHECK(csv.find("\n1,nan,") != std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(csv.substr(csv.size() - 3) == ",2\n");

    const std::string sp = spectra_csv({1.0, 2.0}, 1.0, 10.0, 1.0);
    CHECK(sp.rfind("omega,J_abrupt,J_DL,J_exp\n", 0) == 0);
    CHECK(std::count(sp.begin(), sp.end(), '\n') == 3);
}

TEST_CASE("atomic write leaves only the target") {
    const fs::path d = scratch_dir("atomic");
    write_atomic(d / "a.csv", "one\n");
    write_atomic(d / "a.csv", "two\n");
    CHECK(slurp(d / "a.csv") == "two\n");
    CHECK(std::distance(fs::directory_iterator(d), fs::directory_iterator{}) == 1);
    CHECK_THROWS(write_atomic(d / "missing" / "b.csv", "x"));
    fs::remove_all(d);
}

TEST_CASE("sweep writes every point and a manifest, independent of worker count") {
    const RunConfig cfg = RunConfig::parse("omega0=1\nomega0=2\nomega0=3\nregime=high\nomega_th=5\nlambda=20\nt_max=0.5\npoints=6\n");
    const fs::path a = scratch_dir("sweep1"), b = scratch_dir("sweep4");
    const SweepSummary sa = run_sweep(cfg, a, 1);
    const SweepSummary sb = run_sweep(cfg, b, 4);
    CHECK_FALSE(sa.any_failure());
    REQUIRE(sa.points.size() == 3);
    for (const auto& p : sa.points) {
        CHECK(fs::exists(a / p.file));
        CHECK(slurp(a / p.file) == slurp(b / p.file));
    }
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["count"] == 3);
    CHECK(m["points"].size() == 3);
    CHECK(m["points"][2]["params"]["omega0"] == "3");
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("worker count from the environment") {
    ::setenv("QBM_WORKERS", "3", 1);
    CHECK(default_workers() == 3);
    ::setenv("QBM_WORKERS", "zero", 1);
    CHECK_THROWS_AS(default_workers(), ConfigError);
    ::unsetenv("QBM_WORKERS");
    CHECK(default_workers() >= 1);
}

}  // TEST_SUITE

TEST_SUITE("validation") {

TEST_CASE("report round-trips through JSON, NaN included") {
    ValidationReport r;
    r.level = "fast";
    r.checks.push_back({"a", 0, CheckStatus::Pass, 1e-17, 1e-14, "oracle", "detail", 0.25});
    r.checks.push_back({"b", 3, CheckStatus::Fail, std::numeric_limits<double>::quiet_NaN(), 0.05, "fit", "", 1.0});
    r.checks.push_back({"c", 5, CheckStatus::Skipped, 0.0, 0.0, "", "", 0.0});
    const ValidationReport back = ValidationReport::from_json(nlohmann::json::parse(r.to_json().dump(2)));
    CHECK(back == r);
    CHECK_FALSE(r.passed());
    CHECK(check_status_from_string("skipped") == CheckStatus::Skipped);
}

}  // TEST_SUITE
