// decoherence.hpp - decoherence exponents, density-matrix decay and the long-time laws

#pragma once

#include <string>
#include <vector>

#include "qbm/coefficients.hpp"

namespace qbm {

struct Separation {
    double dx = 1.0;
    double dy = 1.0;
};

struct DecoherenceExponent {
    cplx d1{};  // (dx^2 + dy^2) int_0^t lambda_1
    cplx d2{};  // 2 dx dy int_0^t lambda_2
    double t = 0.0;
};

struct DensityRatio {
    double magnitude = 1.0;
    double phase = 0.0;
    double log_magnitude = 0.0;  // -Re(D1 + D2), never clamped
    bool clamped = false;
};

inline constexpr double kMagnitudeFloor = 1e-300;

struct CurveSeries {
    std::vector<double> times;
    std::vector<double> magnitude;
    std::vector<double> phase;
    std::vector<double> log_magnitude;
    std::vector<cplx> lambda1, lambda2;
    std::vector<cplx> d1, d2;
    std::vector<std::string> method;
    std::vector<double> error;
    std::vector<bool> failed;
    std::vector<bool> clamped;
    std::vector<std::string> message;

    bool any_failed() const;
};

DecoherenceExponent exponents(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                              const Separation& sep, double t);

DensityRatio ratio_from_exponent(const DecoherenceExponent& d);

DensityRatio density_ratio(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                           const Separation& sep, double t);

// gamma Omega_th (dx^2 + dy^2) / (2 hbar), taking gamma, Omega_th and hbar from sys.
double hightemp_rate(const SystemParams& sys, const Separation& sep);

struct PowerLaw {
    double exponent = 0.0;  // (gamma/hbar)(dx^2 + dy^2)
    double log_c = 0.0;
    double c_const = 0.0;
};

// rho(t)/rho(0) = (c t)^(-exponent) at low temperature for the abrupt cutoff,
// with log c exactly as published.
PowerLaw lowtemp_powerlaw(const SystemParams& sys, const SpectralDensity& sd, const Separation& sep);

CurveSeries curve(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                  const Separation& sep, const std::vector<double>& grid,
                  CurveMethod method = CurveMethod::Quadrature, CumulativeOptions opts = {});

// 200 log-spaced points from 1e-3/Lambda to min(1, 700/Lambda).
std::vector<double> default_grid(const SpectralDensity& sd, std::size_t points = 200);

std::vector<double> log_grid(double t_min, double t_max, std::size_t points);

}  // namespace qbm
