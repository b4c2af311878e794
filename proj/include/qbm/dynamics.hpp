// dynamics.hpp - mode constants, kernel weights F1..F4 and the position propagator

#pragma once

#include <Eigen/Dense>

#include "qbm/bath.hpp"

namespace qbm {

struct SystemParams {
    double m = 1.0;
    double omega0 = 10.0;
    double omega_c = 1.0;
    double gamma = 1.0;
    double hbar = 1.0;
    double omega_th = 0.0;

    void validate() const;
};

struct ModeConstants {
    double a_prime = 0.0;
    double b_prime = 0.0;
    double m_coef = 0.0;
    double p_coef = 0.0;
    double g_coef = 0.0;
    double root = 0.0;  // sqrt(4 w0^2 + wc^2)
};

// A' = sqrt(2w0^2 + wc^2 + wc S)/2, B' = sqrt(2w0^2 + wc^2 - wc S)/2, S = sqrt(4w0^2 + wc^2).
// These are the normal-mode frequencies divided by sqrt(2).
ModeConstants mode_constants(const SystemParams& sys);

enum class Weight { F1, F2, F3, F4 };

double f_weight(const SystemParams& sys, double tau, Weight which);

// Same as f_weight with precomputed constants; used inside quadrature loops.
struct Weights {
    explicit Weights(const SystemParams& sys);
    double f1(double tau) const;
    double f2(double tau) const;
    double f3(double tau) const;
    double f4(double tau) const;

    SystemParams sys;
    ModeConstants mc;
};

// sin(k tau)/k with the k -> 0 limit.
double sin_over(double k, double tau);

using Matrix4 = Eigen::Matrix4d;

// (x, y, vx, vy)(tau) = T(tau) (X, Y, Vx, Vy) for the equations of motion
//   xdd = -(w0^2/2) x + (wc/sqrt2) yd,  ydd = -(w0^2/2) y - (wc/sqrt2) xd,
// whose normal modes are exactly A' and B'. T[0][0] equals F1 and T[0][1] equals -F2/2.
Matrix4 heisenberg_transfer(const SystemParams& sys, double tau);

// Frequencies entering the propagator's equations of motion.
struct EomFrequencies {
    double omega0_sq;
    double omega_c;
};
EomFrequencies eom_frequencies(const SystemParams& sys);

struct FrequencyShift {
    double value = 0.0;
    double tail_estimate = 0.0;
};

// -(2/m) int_0^t_max eta(tau) F1(tau) dtau, eta by quadrature.
FrequencyShift frequency_shift(const SystemParams& sys, const SpectralDensity& sd, double t_max);

}  // namespace qbm
