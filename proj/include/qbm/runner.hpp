// runner.hpp - executes configuration points and parameter sweeps

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qbm/config.hpp"

namespace qbm {

struct PointOutput {
    std::string csv;
    bool numerical_failure = false;
    std::string message;
};

// Curve or spectra CSV for one point. Numerical trouble is reported in the
// result (and per row through err_flag), never thrown.
PointOutput render_point(const RunPoint& p);

enum class PointStatus { Ok, NumericalError };

struct PointRecord {
    std::size_t index = 0;
    std::string file;
    PointStatus status = PointStatus::Ok;
    std::string message;
    std::vector<std::pair<std::string, std::string>> params;
};

struct SweepSummary {
    std::vector<PointRecord> points;
    bool any_failure() const;
};

std::string point_filename(std::size_t index, const RunPoint& p);

// One CSV per point plus manifest.json in dir; points run on up to `workers` threads.
// kind_override forces curve or spectra output for every point when set.
SweepSummary run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, unsigned workers,
                       const RunKind* kind_override = nullptr);

// QBM_WORKERS if set, otherwise the hardware thread count (at least 1).
unsigned default_workers();

}  // namespace qbm
