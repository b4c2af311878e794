#include "qbm/dynamics.hpp"

#include <cmath>
#include <complex>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

void SystemParams::validate() const {
    if (!(m > 0.0)) throw DomainError("SystemParams: m must be positive");
    if (!(omega0 >= 0.0) || !(omega_c >= 0.0)) throw DomainError("SystemParams: frequencies must be >= 0");
    if (!(hbar > 0.0)) throw DomainError("SystemParams: hbar must be positive");
    if (omega0 == 0.0 && omega_c == 0.0)
        throw DegenerateSystemError("SystemParams: omega0 and omega_c both zero");
}

ModeConstants mode_constants(const SystemParams& sys) {
    sys.validate();
    const double w2 = sys.omega0 * sys.omega0, c = sys.omega_c;
    ModeConstants mc;
    mc.root = std::sqrt(4.0 * w2 + c * c);
    const double base = 2.0 * w2 + c * c;
    mc.a_prime = std::sqrt(base + c * mc.root) / 2.0;
    // base - c*S loses digits when wc >> w0; base^2 - c^2 S^2 = 4 w0^4 gives the stable form.
    mc.b_prime = w2 == 0.0 ? 0.0 : std::sqrt(4.0 * w2 * w2 / (base + c * mc.root)) / 2.0;
    mc.m_coef = (mc.root - c) / (2.0 * mc.root);
    mc.p_coef = (mc.root + c) / (2.0 * mc.root);
    mc.g_coef = std::sqrt(2.0) * w2 / mc.root;
    return mc;
}

double sin_over(double k, double tau) {
    const double x = k * tau;
    if (std::abs(x) < 1e-4) return tau * (1.0 - x * x / 6.0);
    return std::sin(x) / k;
}

Weights::Weights(const SystemParams& s) : sys(s), mc(mode_constants(s)) {}

double Weights::f1(double tau) const {
    return mc.m_coef * std::cos(mc.a_prime * tau) + mc.p_coef * std::cos(mc.b_prime * tau);
}

double Weights::f2(double tau) const {
    const double a = mc.a_prime, b = mc.b_prime;
    if (a - b < 1e-6 * a) {
        // sin(b t)/b - sin(a t)/a ~ -(a - b) d/dk[sin(k t)/k] at the midpoint
        const double k = 0.5 * (a + b);
        const double deriv = (tau * std::cos(k * tau) - sin_over(k, tau)) / k;
        return -mc.g_coef * (a - b) * deriv;
    }
    if (a * tau < 1.0) {
        // Series in tau: the two sin(k t)/k terms agree to O(t^3) and cancel otherwise.
        const double a2 = a * a, b2 = b * b;
        const double diff2 = -0.5 * sys.omega_c * mc.root;  // b^2 - a^2
        double sum = 0.0, sym = 0.0, term = tau;
        // sym_n = sum_{k<n} b^{2k} a^{2(n-1-k)}, updated as sym_{n+1} = a^2 sym_n + b^{2n}
        double b_pow = 1.0;
        for (int n = 1; n < 30; ++n) {
            sym = a2 * sym + b_pow;
            b_pow *= b2;
            term *= -tau * tau / ((2.0 * n) * (2.0 * n + 1.0));
            const double piece = term * diff2 * sym;
            sum += piece;
            if (std::abs(piece) <= 1e-17 * std::abs(sum)) break;
        }
        return mc.g_coef * sum;
    }
    return mc.g_coef * (sin_over(b, tau) - sin_over(a, tau));
}

double Weights::f3(double tau) const {
    const double S = mc.root, c = sys.omega_c;
    return -((c + S) * sin_over(mc.a_prime, tau) + (S - c) * sin_over(mc.b_prime, tau)) /
           (sys.m * std::sqrt(2.0) * S);
}

double Weights::f4(double tau) const {
    return 2.0 * sys.omega_c * (std::cos(mc.a_prime * tau) + std::cos(mc.b_prime * tau)) / (sys.m * mc.root);
}

double f_weight(const SystemParams& sys, double tau, Weight which) {
    if (tau < 0.0) throw DomainError("f_weight: tau < 0");
    const Weights w(sys);
    switch (which) {
        case Weight::F1: return w.f1(tau);
        case Weight::F2: return w.f2(tau);
        case Weight::F3: return w.f3(tau);
        case Weight::F4: return w.f4(tau);
    }
    return 0.0;
}

EomFrequencies eom_frequencies(const SystemParams& sys) {
    return {0.5 * sys.omega0 * sys.omega0, sys.omega_c / std::sqrt(2.0)};
}

Matrix4 heisenberg_transfer(const SystemParams& sys, double tau) {
    if (tau < 0.0) throw DomainError("heisenberg_transfer: tau < 0");
    const ModeConstants mc = mode_constants(sys);
    const double a = mc.a_prime, b = mc.b_prime, sum = a + b;
    using C = std::complex<double>;
    const C I(0.0, 1.0);
    const C ep = std::exp(I * (b * tau)), em = std::exp(-I * (a * tau));
    // zeta = x + i y solves zeta'' = -w0b^2 zeta - i wcb zeta', modes e^{iB't}, e^{-iA't}.
    Matrix4 T;
    const C z0[4] = {1.0, I, 0.0, 0.0};
    const C v0[4] = {0.0, 0.0, 1.0, I};
    for (int col = 0; col < 4; ++col) {
        const C ca = (a * z0[col] - I * v0[col]) / sum;
        const C cb = (b * z0[col] + I * v0[col]) / sum;
        const C z = ca * ep + cb * em;
        const C zd = I * b * ca * ep - I * a * cb * em;
        T(0, col) = z.real();
        T(1, col) = z.imag();
        T(2, col) = zd.real();
        T(3, col) = zd.imag();
    }
    return T;
}

FrequencyShift frequency_shift(const SystemParams& sys, const SpectralDensity& sd, double t_max) {
    if (!(t_max > 0.0)) throw DomainError("frequency_shift: t_max must be positive");
    const Weights w(sys);
    if (sd.gamma == 0.0) return {};
    const double osc = sd.cutoff == Cutoff::Abrupt ? kPi / sd.lambda : 1e300;
    const double w_max = std::min(osc, 0.5 / std::max(w.mc.a_prime, 1e-300));
    const auto edges = quad::panel_edges(t_max, 1e-3 / sd.lambda, w_max, {0.5 * t_max});
    auto integrand = [&](double tau) { return dissipation_kernel_quadrature(sd, tau) * w.f1(tau); };
    const quad::Tolerance tol{1e-8, 0.0, 1.0, 4000, {}};
    double total = 0.0, half = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        total += quad::integrate_scalar(integrand, edges[i], edges[i + 1], tol).value;
        if (edges[i + 1] == 0.5 * t_max) half = total;
    }
    const double scale = -2.0 / sys.m;
    return {scale * total, std::abs(scale * (total - half))};
}

}  // namespace qbm
