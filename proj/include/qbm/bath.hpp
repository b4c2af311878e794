// bath.hpp - spectral densities and the noise / dissipation kernels

#pragma once

#include <string>

#include "qbm/specfun.hpp"

namespace qbm {

enum class Cutoff { Abrupt, DrudeLorentz, Exponential };
enum class Regime { Exact, HighTemperature, LowTemperature };

struct SpectralDensity {
    double s = 1.0;
    Cutoff cutoff = Cutoff::Exponential;
    double lambda = 1e3;
    double gamma = 1.0;

    void validate() const;
};

struct ThermalRegime {
    Regime kind = Regime::LowTemperature;
    double omega_th = 0.0;

    void validate() const;
};

std::string to_string(Cutoff c);
std::string to_string(Regime r);
Cutoff cutoff_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

// J(omega); zero above the cutoff for the abrupt model.
double spectral_density(const SpectralDensity& sd, double omega);

// J(omega) * thermal factor, the amplitude multiplying cos(omega tau) in nu.
double noise_amplitude(const SpectralDensity& sd, const ThermalRegime& regime, double omega);

struct KernelEstimate {
    double value = 0.0;
    double error = 0.0;
};

// nu(tau) = int_0^inf J(w) coth(w/Omega) cos(w tau) dw (or its high/low-T limits).
KernelEstimate noise_kernel_estimate(const SpectralDensity& sd, const ThermalRegime& regime, double tau,
                                     double rel = 1e-8);
double noise_kernel_quadrature(const SpectralDensity& sd, const ThermalRegime& regime, double tau);

// eta(tau) = int_0^inf J(w) sin(w tau) dw.
KernelEstimate dissipation_kernel_estimate(const SpectralDensity& sd, double tau, double rel = 1e-8);
double dissipation_kernel_quadrature(const SpectralDensity& sd, double tau);

struct ClosedKernel {
    double value = 0.0;
    double imag_part = 0.0;  // nonzero only for the complex Drude-Lorentz high-T expression
};

// Published closed forms: s = 1 for every cutoff, s = 1/2 and 3/2 from the
// super/sub-Ohmic tables, high and low temperature only.
bool has_closed_kernel(const SpectralDensity& sd, const ThermalRegime& regime);
ClosedKernel noise_kernel_closed(const SpectralDensity& sd, const ThermalRegime& regime, double tau);
double noise_kernel_closed_value(const SpectralDensity& sd, const ThermalRegime& regime, double tau);

// Largest tau where the closed form evaluates without overflow or cancellation failure.
double closed_kernel_window(const SpectralDensity& sd, const ThermalRegime& regime);

// False where the published kernel does not equal its defining integral
// (the Ohmic Drude-Lorentz cot*cosh forms).
bool closed_kernel_matches_definition(const SpectralDensity& sd, const ThermalRegime& regime);

}  // namespace qbm
