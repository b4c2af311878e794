// config.hpp - flat key=value run configuration with sweep expansion

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qbm/decoherence.hpp"
#include "qbm/errors.hpp"

namespace qbm {

enum class RunKind { Curve, Spectra };

struct TimeGrid {
    bool use_default = true;  // 200 log points from 1e-3/Lambda to min(1, 700/Lambda)
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t points = 200;
    bool logarithmic = true;
    bool include_zero = false;

    std::vector<double> build(const SpectralDensity& sd) const;
};

struct FrequencyGrid {
    double omega_min = 0.0;  // 0 selects 1e-3 Lambda
    double omega_max = 0.0;  // 0 selects 5 Lambda
    std::size_t points = 400;
    bool logarithmic = true;

    std::vector<double> build(double lambda) const;
};

// One fully resolved grid point of a configuration.
struct RunPoint {
    RunKind kind = RunKind::Curve;
    SystemParams sys;
    SpectralDensity sd;
    ThermalRegime regime;
    Separation sep;
    TimeGrid grid;
    FrequencyGrid omega_grid;
    CurveMethod method = CurveMethod::Quadrature;
    double rel = 1e-8;
    // swept key -> value text, in sweep-axis order
    std::vector<std::pair<std::string, std::string>> assignment;
};

class RunConfig {
public:
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    // Number of grid points in the sweep cross product.
    std::size_t size() const;
    // Keys with more than one value, in order of first appearance.
    const std::vector<std::string>& sweep_axes() const { return axes_; }
    RunPoint point(std::size_t index) const;

    std::string out;  // output path from the config, may be empty
    std::size_t sweep_cap = 10000;

private:
    std::vector<std::string> order_;
    std::map<std::string, std::vector<std::string>> values_;
    std::vector<std::string> axes_;
};

}  // namespace qbm
