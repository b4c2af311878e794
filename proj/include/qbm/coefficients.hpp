// coefficients.hpp - decoherence coefficients lambda_1(t), lambda_2(t)

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qbm/bath.hpp"
#include "qbm/dynamics.hpp"

namespace qbm {

enum class Method { Quadrature, ClosedForm };

struct LambdaPair {
    cplx lambda1{};
    cplx lambda2{};
    double t = 0.0;
    Method method = Method::Quadrature;
    double est_error = 0.0;
};

// (1/hbar) int_0^t nu(tau) F_{1,2}(tau) dtau with nu from noise_kernel_quadrature.
LambdaPair lambda_quadrature(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                             double t, double rel = 1e-7);

// Same integral for an arbitrary (possibly complex) kernel; osc_period caps the panel width.
LambdaPair lambda_from_kernel(const SystemParams& sys, const std::function<cplx(double)>& nu, double t,
                              double osc_period, double rel = 1e-9);

// AsPrinted evaluates the published expressions verbatim. Corrected applies the
// documented fixes (see documented_findings) so that the closed form equals
// the defining integral of its kernel.
enum class FormVariant { AsPrinted, Corrected };

bool has_lambda_closed(const SpectralDensity& sd, const ThermalRegime& regime, int component);
cplx lambda1_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                    FormVariant variant = FormVariant::AsPrinted);
cplx lambda2_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                    FormVariant variant = FormVariant::AsPrinted);
LambdaPair lambda_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                         FormVariant variant = FormVariant::AsPrinted);

// Corrected closed forms that equal the physical coefficient (kernel equals its
// defining integral); these are the ones the curve fast path may use.
bool closed_lambda_is_physical(const SpectralDensity& sd, const ThermalRegime& regime, int component);

enum class GFunction { G1, G2, G3, G4, G5, G6, G7, G8 };

struct GContext {
    double lambda = 0.0;
    double omega_th = 0.0;
    double t = 0.0;
};

// z is the first argument (A', B' or the imaginary A, B); v is v' (unused by g1, g3, g5, g7).
cplx g_function(GFunction which, cplx z, double v, const GContext& ctx,
                FormVariant variant = FormVariant::AsPrinted);

struct Finding {
    std::string id;
    Cutoff cutoff;
    Regime regime;
    int component;  // 1 or 2; 0 for kernel-level findings
    std::string description;
};

// Discrepancies between the printed closed forms and their defining integrals.
const std::vector<Finding>& documented_findings();

// Cumulative engine shared by curve evaluation: one instance per evaluation context.
enum class CurveMethod { Quadrature, ClosedFormWhereValid };

struct CumulativeSample {
    double t = 0.0;
    cplx lambda1{}, lambda2{};
    cplx int_lambda1{}, int_lambda2{};  // int_0^t lambda dt'
    double error = 0.0;
    bool failed = false;
    std::string method;  // quadrature | closed | mixed
    std::string message;
};

struct CumulativeOptions {
    double rel = 1e-8;  // per-panel tolerance against the panel L1 norm; kernels get rel/10
};

class CumulativeLambda {
public:
    CumulativeLambda(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                     CurveMethod method, CumulativeOptions opts = {});

    // grid must be non-decreasing and non-negative
    std::vector<CumulativeSample> run(const std::vector<double>& grid) const;

private:
    SystemParams sys_;
    SpectralDensity sd_;
    ThermalRegime regime_;
    CurveMethod method_;
    CumulativeOptions opts_;
};

}  // namespace qbm
