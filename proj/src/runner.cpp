#include "qbm/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "qbm/output.hpp"

namespace qbm {

namespace {

std::string sanitize(const std::string& v) {
    std::string out;
    for (char ch : v) {
        const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                          ch == '.' || ch == '-' || ch == '+' || ch == '_';
        out += keep ? ch : '_';
    }
    return out;
}

}  // namespace

PointOutput render_point(const RunPoint& p) {
    PointOutput out;
    if (p.kind == RunKind::Spectra) {
        out.csv = spectra_csv(p.omega_grid.build(p.sd.lambda), p.sd.s, p.sd.lambda, p.sd.gamma);
        return out;
    }
    try {
        const auto grid = p.grid.build(p.sd);
        const CurveSeries c = curve(p.sys, p.sd, p.regime, p.sep, grid, p.method, CumulativeOptions{p.rel});
        out.csv = curve_csv(c);
        for (std::size_t i = 0; i < c.failed.size(); ++i) {
            if (c.failed[i]) {
                out.numerical_failure = true;
                out.message = "t=" + format_real(c.times[i]) + ": " + c.message[i];
                break;
            }
        }
    } catch (const std::exception& e) {
        out.csv = std::string(kCurveHeader) + "\n";
        out.numerical_failure = true;
        out.message = e.what();
    }
    return out;
}

bool SweepSummary::any_failure() const {
    for (const auto& p : points)
        if (p.status != PointStatus::Ok) return true;
    return false;
}

std::string point_filename(std::size_t index, const RunPoint& p) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%04zu", index);
    std::string name = idx;
    for (const auto& [k, v] : p.assignment) name += "_" + k + "-" + sanitize(v);
    return name + ".csv";
}

SweepSummary run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, unsigned workers,
                       const RunKind* kind_override) {
    const std::size_t n = cfg.size();
    std::vector<RunPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        points.push_back(cfg.point(i));
        if (kind_override) points.back().kind = *kind_override;
    }
    std::filesystem::create_directories(dir);

    SweepSummary summary;
    summary.points.resize(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            PointRecord& rec = summary.points[i];
            rec.index = i;
            rec.params = points[i].assignment;
            rec.file = point_filename(i, points[i]);
            try {
                const PointOutput o = render_point(points[i]);
                write_atomic(dir / rec.file, o.csv);
                rec.status = o.numerical_failure ? PointStatus::NumericalError : PointStatus::Ok;
                rec.message = o.message;
            } catch (const std::exception& e) {
                rec.status = PointStatus::NumericalError;
                rec.message = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    nlohmann::ordered_json m;
    m["count"] = n;
    m["axes"] = cfg.sweep_axes();
    m["points"] = nlohmann::ordered_json::array();
    for (const auto& rec : summary.points) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : rec.params) params[k] = v;
        m["points"].push_back({{"index", rec.index},
                               {"file", rec.file},
                               {"status", rec.status == PointStatus::Ok ? "ok" : "numerical_error"},
                               {"message", rec.message},
                               {"params", params}});
    }
    write_atomic(dir / "manifest.json", m.dump(2) + "\n");
    return summary;
}

unsigned default_workers() {
    if (const char* env = std::getenv("QBM_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<unsigned>(v);
        throw ConfigError("QBM_WORKERS must be an integer in [1, 4096]");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qbm
