#include "qbm/decoherence.hpp"

#include <cmath>
#include <limits>

#include "qbm/errors.hpp"

namespace qbm {

bool CurveSeries::any_failed() const {
    for (bool f : failed)
        if (f) return true;
    return false;
}

DensityRatio ratio_from_exponent(const DecoherenceExponent& d) {
    const cplx total = d.d1 + d.d2;
    DensityRatio r;
    r.log_magnitude = -total.real();
    r.phase = -total.imag();
    r.magnitude = std::exp(r.log_magnitude);
    if (!(r.magnitude >= kMagnitudeFloor)) {
        r.magnitude = kMagnitudeFloor;
        r.clamped = true;
    }
    return r;
}

DecoherenceExponent exponents(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                              const Separation& sep, double t) {
    if (t < 0.0) throw DomainError("exponents: t < 0");
    const CurveSeries c = curve(sys, sd, regime, sep, {t});
    if (c.failed[0]) throw NonConvergenceError("exponents: " + c.message[0]);
    return {c.d1[0], c.d2[0], t};
}

DensityRatio density_ratio(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                           const Separation& sep, double t) {
    return ratio_from_exponent(exponents(sys, sd, regime, sep, t));
}

double hightemp_rate(const SystemParams& sys, const Separation& sep) {
    return sys.gamma * sys.omega_th * (sep.dx * sep.dx + sep.dy * sep.dy) / (2.0 * sys.hbar);
}

PowerLaw lowtemp_powerlaw(const SystemParams& sys, const SpectralDensity& sd, const Separation& sep) {
    sd.validate();
    if (sd.cutoff != Cutoff::Abrupt) throw UnsupportedError("lowtemp_powerlaw: abrupt cutoff only");
    const ModeConstants mc = mode_constants(sys);
    const double L = sd.lambda, a2 = mc.a_prime * mc.a_prime, b2 = mc.b_prime * mc.b_prime;
    if (!(L > mc.a_prime)) throw DomainError("lowtemp_powerlaw: requires Lambda > A'");
    const double g = kEulerGamma + std::log(L), L2 = L * L;
    const double bracket =
        L2 * L2 * g - L2 * (mc.p_coef + g) * b2 + a2 * (-L2 * (mc.m_coef + g) + 1.0 + g) * b2;
    PowerLaw out;
    out.exponent = sd.gamma / sys.hbar * (sep.dx * sep.dx + sep.dy * sep.dy);
    out.log_c = 2.0 / ((L2 - a2) * (L2 - b2)) * bracket;
    out.c_const = std::exp(out.log_c);
    return out;
}

CurveSeries curve(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                  const Separation& sep, const std::vector<double>& grid, CurveMethod method,
                  CumulativeOptions opts) {
    if (!std::isfinite(sep.dx) || !std::isfinite(sep.dy)) throw DomainError("curve: separation must be finite");
    const CumulativeLambda engine(sys, sd, regime, method, opts);
    const auto samples = engine.run(grid);
    const double w1 = sep.dx * sep.dx + sep.dy * sep.dy, w2 = 2.0 * sep.dx * sep.dy;

    CurveSeries c;
    const std::size_t n = grid.size();
    c.times = grid;
    c.magnitude.resize(n);
    c.phase.resize(n);
    c.log_magnitude.resize(n);
    c.lambda1.resize(n);
    c.lambda2.resize(n);
    c.d1.resize(n);
    c.d2.resize(n);
    c.method.resize(n);
    c.error.resize(n);
    c.failed.resize(n);
    c.clamped.resize(n);
    c.message.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[i];
        c.lambda1[i] = s.lambda1;
        c.lambda2[i] = s.lambda2;
        c.method[i] = s.method;
        c.error[i] = s.error * std::max(w1, std::abs(w2));
        c.failed[i] = s.failed;
        c.message[i] = s.message;
        // Skip zero prefactors so a NaN integral on a failed point cannot leak into D.
        c.d1[i] = w1 == 0.0 ? cplx{} : w1 * s.int_lambda1;
        c.d2[i] = w2 == 0.0 ? cplx{} : w2 * s.int_lambda2;
        const DensityRatio r = ratio_from_exponent({c.d1[i], c.d2[i], s.t});
        c.magnitude[i] = s.failed ? std::numeric_limits<double>::quiet_NaN() : r.magnitude;
        c.phase[i] = r.phase;
        c.log_magnitude[i] = r.log_magnitude;
        c.clamped[i] = r.clamped && !s.failed;
    }
    return c;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t points) {
    if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) throw DomainError("log_grid: need 0 < t_min < t_max");
    std::vector<double> g(points);
    const double l0 = std::log(t_min), l1 = std::log(t_max);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
    g.front() = t_min;
    g.back() = t_max;
    return g;
}

std::vector<double> default_grid(const SpectralDensity& sd, std::size_t points) {
    sd.validate();
    const double t_min = 1e-3 / sd.lambda;
    const double t_max = std::min(1.0, 700.0 / sd.lambda);
    return log_grid(t_min, t_max, points);
}

}  // namespace qbm
