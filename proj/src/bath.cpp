#include "qbm/bath.hpp"

#include <cmath>
#include <limits>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

double thermal_x_coth_x(double x) {
    if (x < 1e-4) return 1.0 + x * x / 3.0;
    return x / std::tanh(x);
}

double cutoff_factor(const SpectralDensity& sd, double w) {
    switch (sd.cutoff) {
        case Cutoff::Abrupt: return w > sd.lambda ? 0.0 : 1.0;
        case Cutoff::DrudeLorentz: {
            const double r = w / sd.lambda;
            return 1.0 / (1.0 + r * r);
        }
        case Cutoff::Exponential: return std::exp(-w / sd.lambda);
    }
    return 0.0;
}

quad::FourierOptions fourier_options(const SpectralDensity& sd, double scale, double rel) {
    quad::FourierOptions o;
    o.rel = rel;
    o.abs = 1e-12;
    o.scale = scale;
    o.tail_start = 1.5 * std::max(1.0, sd.s) * sd.lambda;
    if (sd.cutoff == Cutoff::Abrupt) o.upper = sd.lambda;
    return o;
}

double cot_checked(double x) {
    const double sn = std::sin(x);
    if (std::abs(sn) < 1e-10) throw PoleError("noise_kernel_closed: cot(Lambda/Omega_th) at a pole");
    return std::cos(x) / sn;
}

double cosh_checked(double x) {
    if (std::abs(x) > 700.0) throw RangeError("noise_kernel_closed: cosh(Lambda tau) overflows");
    return std::cosh(x);
}

double f12(double upper, double lower2, double x) {
    // 1F2(a; 1/2, b; -x^2/4), the abrupt-cutoff table entries
    const PFQResult r = hypergeometric_pfq({{upper}, {0.5, lower2}}, -0.25 * x * x);
    if (r.error_bound > 1e-8 * std::abs(r.value))
        throw PrecisionLossError("noise_kernel_closed: 1F2 cancellation beyond tolerance");
    return r.value;
}

// e^{-x} + e^{x} erfc(sqrt x) + sign * e^{-x} erfi(sqrt x), evaluated term by term
double dl_erf_combo(double x, double sign) {
    if (x > 700.0) throw RangeError("noise_kernel_closed: erfi(sqrt(Lambda tau)) overflows");
    const double r = std::sqrt(x);
    const double em = std::exp(-x);
    return em + std::exp(x) * std::erfc(r) + sign * em * erf_family(r, ErfKind::Erfi);
}

// Gamma(a) Lambda^a (1 + x^2)^{-a/2} cos(a atan x), the exponential-cutoff table entries
double gamma_form(double a, double lambda, double x) {
    return gamma_fn(a) * std::pow(lambda, a) * std::pow(1.0 + x * x, -0.5 * a) * std::cos(a * std::atan(x));
}

double abrupt_low_ohmic(double x) {
    // (cos x - 1 + x sin x) / x^2
    if (x < 0.5) {
        double sum = 0.0, pw = 1.0, fact = 2.0;
        for (int k = 1; k < 12; ++k) {
            sum += (k % 2 ? -1.0 : 1.0) * (1.0 - 2.0 * k) * pw / fact;
            pw *= x * x;
            fact *= double(2 * k + 1) * double(2 * k + 2);
        }
        return sum;
    }
    return (std::cos(x) - 1.0 + x * std::sin(x)) / (x * x);
}

}  // namespace

void SpectralDensity::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("SpectralDensity: s must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("SpectralDensity: cutoff must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("SpectralDensity: gamma must be non-negative");
}

void ThermalRegime::validate() const {
    if (kind != Regime::LowTemperature && !(omega_th > 0.0))
        throw DomainError("ThermalRegime: omega_th must be positive");
}

std::string to_string(Cutoff c) {
    switch (c) {
        case Cutoff::Abrupt: return "abrupt";
        case Cutoff::DrudeLorentz: return "drude_lorentz";
        case Cutoff::Exponential: return "exponential";
    }
    return "?";
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Exact: return "exact";
        case Regime::HighTemperature: return "high";
        case Regime::LowTemperature: return "low";
    }
    return "?";
}

Cutoff cutoff_from_string(const std::string& s) {
    if (s == "abrupt") return Cutoff::Abrupt;
    if (s == "drude_lorentz" || s == "dl") return Cutoff::DrudeLorentz;
    if (s == "exponential" || s == "exp") return Cutoff::Exponential;
    throw ConfigError("unknown cutoff '" + s + "'");
}

Regime regime_from_string(const std::string& s) {
    if (s == "exact") return Regime::Exact;
    if (s == "high") return Regime::HighTemperature;
    if (s == "low") return Regime::LowTemperature;
    throw ConfigError("unknown regime '" + s + "'");
}

double spectral_density(const SpectralDensity& sd, double omega) {
    if (omega < 0.0) throw DomainError("spectral_density: omega < 0");
    return sd.gamma * std::pow(omega, sd.s) * cutoff_factor(sd, omega);
}

double noise_amplitude(const SpectralDensity& sd, const ThermalRegime& regime, double w) {
    const double cut = cutoff_factor(sd, w);
    switch (regime.kind) {
        case Regime::LowTemperature: return sd.gamma * std::pow(w, sd.s) * cut;
        case Regime::HighTemperature: return sd.gamma * regime.omega_th * std::pow(w, sd.s - 1.0) * cut;
        case Regime::Exact:
            return sd.gamma * regime.omega_th * std::pow(w, sd.s - 1.0) *
                   thermal_x_coth_x(w / regime.omega_th) * cut;
    }
    return 0.0;
}

KernelEstimate noise_kernel_estimate(const SpectralDensity& sd, const ThermalRegime& regime, double tau,
                                     double rel) {
    sd.validate();
    regime.validate();
    if (tau < 0.0) throw DomainError("noise_kernel_quadrature: tau < 0");
    if (sd.gamma == 0.0) return {};
    double scale = sd.lambda;
    if (regime.kind == Regime::Exact) scale = std::min(scale, regime.omega_th);
    auto o = fourier_options(sd, scale, rel);
    // Map the w^{s-1} (or w^s) endpoint behaviour to a smooth power of u.
    o.singular_power = regime.kind == Regime::LowTemperature ? 2.0 : std::max(1.0, 2.0 / sd.s);
    auto amp = [&](double w) { return noise_amplitude(sd, regime, w); };
    const auto r = quad::fourier_integral(amp, quad::Trig::Cos, tau, o);
    return {r.value, r.error};
}

double noise_kernel_quadrature(const SpectralDensity& sd, const ThermalRegime& regime, double tau) {
    return noise_kernel_estimate(sd, regime, tau).value;
}

KernelEstimate dissipation_kernel_estimate(const SpectralDensity& sd, double tau, double rel) {
    sd.validate();
    if (tau < 0.0) throw DomainError("dissipation_kernel_quadrature: tau < 0");
    if (sd.gamma == 0.0 || tau == 0.0) return {};
    auto o = fourier_options(sd, sd.lambda, rel);
    o.singular_power = 2.0;
    auto amp = [&](double w) { return spectral_density(sd, w); };
    const auto r = quad::fourier_integral(amp, quad::Trig::Sin, tau, o);
    return {r.value, r.error};
}

double dissipation_kernel_quadrature(const SpectralDensity& sd, double tau) {
    return dissipation_kernel_estimate(sd, tau).value;
}

bool has_closed_kernel(const SpectralDensity& sd, const ThermalRegime& regime) {
    if (regime.kind == Regime::Exact) return false;
    return near(sd.s, 1.0) || near(sd.s, 0.5) || near(sd.s, 1.5);
}

double closed_kernel_window(const SpectralDensity& sd, const ThermalRegime& regime) {
    if (!has_closed_kernel(sd, regime)) return 0.0;
    switch (sd.cutoff) {
        case Cutoff::Abrupt: return near(sd.s, 1.0) ? std::numeric_limits<double>::infinity() : 15.0 / sd.lambda;
        case Cutoff::DrudeLorentz: return 700.0 / sd.lambda;
        case Cutoff::Exponential: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

bool closed_kernel_matches_definition(const SpectralDensity& sd, const ThermalRegime& regime) {
    return has_closed_kernel(sd, regime) && !(sd.cutoff == Cutoff::DrudeLorentz && near(sd.s, 1.0));
}

ClosedKernel noise_kernel_closed(const SpectralDensity& sd, const ThermalRegime& regime, double tau) {
    sd.validate();
    regime.validate();
    if (tau < 0.0) throw DomainError("noise_kernel_closed: tau < 0");
    if (!has_closed_kernel(sd, regime))
        throw UnsupportedError("noise_kernel_closed: no closed form for s=" + std::to_string(sd.s) +
                               ", regime " + to_string(regime.kind));
    const double g = sd.gamma, L = sd.lambda, Om = regime.omega_th;
    const double x = L * tau;
    const bool high = regime.kind == Regime::HighTemperature;
    const double s2 = 2.0 * std::sqrt(2.0);

    if (near(sd.s, 1.0)) {
        switch (sd.cutoff) {
            case Cutoff::Abrupt:
                if (high) return {g * Om * L * (x == 0.0 ? 1.0 : std::sin(x) / x), 0.0};
                return {g * L * L * abrupt_low_ohmic(x), 0.0};
            case Cutoff::DrudeLorentz: {
                const double pre = kPi * g * L * L / 2.0;
                const double cc = cot_checked(L / Om) * cosh_checked(x);
                if (high) return {pre * (cc - kPi * Om * tau), -pre};
                return {pre * cc, 0.0};
            }
            case Cutoff::Exponential:
                if (high) return {g * L * Om / (1.0 + x * x), 0.0};
                {
                    const double a = 1.0 / (L * L), t2 = tau * tau;
                    return {g * (a - t2) / ((a + t2) * (a + t2)), 0.0};
                }
        }
    }

    const bool super = near(sd.s, 1.5);
    switch (sd.cutoff) {
        case Cutoff::Abrupt:
            if (high) {
                if (super) return {2.0 / 3.0 * g * Om * std::pow(L, 1.5) * f12(0.75, 1.75, x), 0.0};
                return {2.0 * g * Om * std::sqrt(L) * f12(0.25, 1.25, x), 0.0};
            }
            if (super) return {0.4 * g * std::pow(L, 2.5) * f12(1.25, 2.25, x), 0.0};
            return {2.0 / 3.0 * g * std::pow(L, 1.5) * f12(0.75, 1.75, x), 0.0};
        case Cutoff::Exponential:
            if (high) return {g * Om * gamma_form(super ? 1.5 : 0.5, L, x), 0.0};
            return {g * gamma_form(super ? 2.5 : 1.5, L, x), 0.0};
        case Cutoff::DrudeLorentz:
            if (high) {
                const double pw = super ? std::pow(L, 1.5) : std::sqrt(L);
                return {g * Om * kPi * pw * dl_erf_combo(x, super ? -1.0 : 1.0) / s2, 0.0};
            }
            if (!super) return {g * kPi * std::pow(L, 1.5) * dl_erf_combo(x, -1.0) / s2, 0.0};
            {
                if (tau == 0.0) throw DomainError("noise_kernel_closed: tau^{-1/2} singular at tau = 0");
                // -2cosh(x) + e^x erf(sqrt x) regrouped as -(e^{-x} + e^x erfc(sqrt x)),
                // which avoids subtracting two e^x-sized numbers.
                const double body =
                    2.0 * std::sqrt(kPi) / std::sqrt(tau) - kPi * std::sqrt(L) * dl_erf_combo(x, 1.0);
                return {g * L * L * body / s2, 0.0};
            }
    }
    throw UnsupportedError("noise_kernel_closed: unsupported combination");
}

double noise_kernel_closed_value(const SpectralDensity& sd, const ThermalRegime& regime, double tau) {
    return noise_kernel_closed(sd, regime, tau).value;
}

}  // namespace qbm
