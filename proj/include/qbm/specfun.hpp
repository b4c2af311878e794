// specfun.hpp - sine/cosine integrals, Gamma, error functions, Lerch Phi, pFq

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qbm {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243104215933593992;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Si(z) = int_0^z sin(t)/t dt, entire.
cplx sin_integral(cplx z);

// Ci(z) = gamma_E + ln z + int_0^z (cos t - 1)/t dt on the principal branch
// (cut along the negative real axis; Ci(-x) = Ci(x) + i*pi for x > 0).
cplx cos_integral(cplx z);

// Cin(z) = int_0^z (1 - cos t)/t dt, entire; Ci(z) = gamma_E + ln z - Cin(z).
cplx cin_integral(cplx z);

// Shi(x) = int_0^x sinh(t)/t dt = -i Si(ix).
double sinh_integral(double x);

double gamma_fn(double x);

enum class ErfKind { Erf, Erfc, Erfi };
double erf_family(double x, ErfKind kind);

// Phi(z, s, a) = sum_k z^k (k+a)^-s for |z| < 1.
cplx lerch_phi(cplx z, double s, double a);

struct PFQParams {
    std::vector<double> upper;
    std::vector<double> lower;
};

struct PFQOptions {
    std::size_t max_terms = 10000;
    std::size_t min_terms = 0;  // force at least this many terms (truncation-order checks)
};

struct PFQResult {
    double value = 0.0;
    double error_bound = 0.0;
    std::size_t terms = 0;
};

PFQResult hypergeometric_pfq(const PFQParams& p, double z, const PFQOptions& opts = {});

}  // namespace qbm
