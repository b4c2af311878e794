#include "qbm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

namespace {

constexpr cplx I(0.0, 1.0);

bool ohmic(const SpectralDensity& sd) { return std::abs(sd.s - 1.0) < 1e-12; }

cplx Si(cplx z) { return sin_integral(z); }
cplx Ci(cplx z) { return cos_integral(z); }

double cot_checked(double x) {
    const double sn = std::sin(x);
    if (std::abs(sn) < 1e-10) throw PoleError("lambda_closed: cot(Lambda/Omega_th) at a pole");
    return std::cos(x) / sn;
}

void check_growth(double lt) {
    if (lt > 700.0) throw RangeError("lambda_closed: cosh(Lambda t) overflows");
}

// Ci(a t) - Ci(b t) + ln(b/a) written through the entire function Cin.
double ci_difference(double a, double b, double t) {
    return (cin_integral(cplx(b * t)) - cin_integral(cplx(a * t))).real();
}

cplx g1(cplx z, const GContext& c, FormVariant v) {
    const double L = c.lambda, Om = c.omega_th, t = c.t;
    check_growth(L * t);
    const bool fix = v == FormVariant::Corrected;
    const double ct = cot_checked(L / Om);
    const double lt_even = fix ? std::cosh(L * t) : std::cos(L * t);
    const cplx first = L * L * ct * (L * std::cos(z * t) * std::sinh(L * t) + lt_even * std::sin(z * t) * z) /
                       (L * L + z * z);
    cplx second = (kPi * Om * (-1.0 + std::cos(z * t)) + (I + kPi * Om * t) * z * std::sin(z * t)) / (z * z);
    if (fix) second *= L * L;
    return first - second;
}

cplx g2(cplx z, double vp, const GContext& c, FormVariant v) {
    const double L = c.lambda, Om = c.omega_th, t = c.t;
    check_growth(L * t);
    const bool fix = v == FormVariant::Corrected;
    const double ct = cot_checked(L / Om);
    const double lt_odd = fix ? std::sinh(L * t) : std::sin(L * t);
    const cplx first = L * L * ct *
                       (z * (L * std::sin(vp * t) * lt_odd + (1.0 - std::cos(vp * t) * std::cosh(L * t)) * vp)) /
                       (L * L + vp * vp);
    cplx second =
        (z * (-kPi * Om * std::sin(vp * t) - I * vp * (1.0 + (-1.0 + I * kPi * Om * t) * std::cos(vp * t)))) /
        (vp * vp);
    if (fix) second *= L * L;
    return first + second;
}

cplx g3(cplx z, const GContext& c, FormVariant v) {
    const double L = c.lambda, t = c.t;
    check_growth(L * t);
    const double sh = std::sinh(L * t), ch = std::cosh(L * t);
    if (v == FormVariant::Corrected)
        return (L * sh * std::cos(z * t) + z * ch * std::sin(z * t)) / (L * L + z * z);
    const cplx d = L * L + z * z;
    return (2.0 * L * std::sin(z * t) * sh * z + std::cos(z * t) * ch * (L * L - z * z) + z * z - L * L) / (d * d);
}

cplx g4(cplx z, double vp, const GContext& c, FormVariant v) {
    const double L = c.lambda, t = c.t;
    check_growth(L * t);
    const double sh = std::sinh(L * t), ch = std::cosh(L * t);
    const double d = L * L + vp * vp;
    if (v == FormVariant::Corrected)
        return -z * (L * sh * std::sin(vp * t) - vp * ch * std::cos(vp * t) + vp) / d;
    return z *
           (2.0 * L * std::cos(vp * t) * sh * vp + ch * std::sin(vp * t) * (vp * vp - L * L) -
            vp * (vp * vp + L * L) * t) /
           (d * d);
}

struct ShiftedArgs {
    cplx p, m;  // (-i + L t) z / L and (i + L t) z / L
};

ShiftedArgs shifted(cplx z, const GContext& c) {
    return {(-I + c.lambda * c.t) * z / c.lambda, (I + c.lambda * c.t) * z / c.lambda};
}

cplx g5(cplx z, const GContext& c) {
    const auto a = shifted(z, c);
    const cplx zl = z / c.lambda;
    return -I * std::cosh(zl) * (Ci(a.p) - Ci(a.m) + I * kPi) - std::sinh(zl) * (Si(a.p) + Si(a.m));
}

cplx g6(cplx z, double vp, const GContext& c, FormVariant v) {
    const auto a = shifted(cplx(vp), c);
    const double vl = vp / c.lambda;
    const cplx lone = v == FormVariant::Corrected ? cplx(sinh_integral(vl)) : Si(cplx(vl));
    return z * (Ci(-I * vl) + Ci(I * vl) - Ci(a.p) - Ci(a.m)) * std::sinh(vl) -
           z * std::cosh(vl) * (2.0 * lone - I * (Si(a.p) - Si(a.m)));
}

cplx g7(cplx z, double a_prime, const GContext& c, FormVariant v) {
    const double L = c.lambda, t = c.t;
    const auto a = shifted(z, c);
    const cplx zl = z / L;
    const cplx tail = v == FormVariant::Corrected ? z : cplx(a_prime);
    return 2.0 * t * L * L * std::cos(z * t) +
           (1.0 + L * L * t * t) *
               (I * (Ci(a.p) - Ci(a.m) + I * kPi) * std::sinh(zl) + std::cosh(zl) * (Si(a.p) + Si(a.m))) * tail;
}

cplx g8(cplx z, double vp, const GContext& c, FormVariant v) {
    const double L = c.lambda, t = c.t;
    const auto a = shifted(cplx(vp), c);
    const double vl = vp / L, lt2 = L * L * t * t;
    const cplx lone = v == FormVariant::Corrected ? cplx(sinh_integral(vl)) : Si(cplx(vl));
    const cplx cim = Ci(-I * vl);
    return 2.0 * I * L * L * t * z * std::sin(vp * t) + I * z * std::cosh(vl) * cim * vp +
           I * z * std::cosh(vl) * (lt2 * cim + (1.0 + lt2) * (Ci(I * vl) - Ci(a.p) - Ci(a.m))) * vp +
           z * (1.0 + lt2) * std::sinh(vl) * (-2.0 * I * lone - Si(a.p) + Si(a.m)) * vp;
}

void require_closed(const SpectralDensity& sd, const ThermalRegime& regime, int component) {
    sd.validate();
    regime.validate();
    if (regime.kind == Regime::Exact || !ohmic(sd))
        throw UnsupportedError("lambda_closed: closed forms exist only for s = 1 in the high/low-T limits");
    if (!has_lambda_closed(sd, regime, component))
        throw NotAvailableError("lambda_closed: abrupt low-T lambda_2 is not available; use lambda_quadrature");
}

}  // namespace

cplx g_function(GFunction which, cplx z, double v, const GContext& ctx, FormVariant variant) {
    if (ctx.lambda == 0.0) throw DomainError("g_function: Lambda = 0");
    switch (which) {
        case GFunction::G1: return g1(z, ctx, variant);
        case GFunction::G2:
            if (v == 0.0) throw DomainError("g_function: v' = 0");
            return g2(z, v, ctx, variant);
        case GFunction::G3: return g3(z, ctx, variant);
        case GFunction::G4: return g4(z, v, ctx, variant);
        case GFunction::G5: return g5(z, ctx);
        case GFunction::G6:
            if (v == 0.0) throw DomainError("g_function: v' = 0");
            return g6(z, v, ctx, variant);
        case GFunction::G7: return g7(z, z.real(), ctx, variant);
        case GFunction::G8:
            if (v == 0.0) throw DomainError("g_function: v' = 0");
            return g8(z, v, ctx, variant);
    }
    throw DomainError("g_function: unknown function");
}

bool has_lambda_closed(const SpectralDensity& sd, const ThermalRegime& regime, int component) {
    if (regime.kind == Regime::Exact || !ohmic(sd)) return false;
    if (sd.cutoff == Cutoff::Abrupt && regime.kind == Regime::LowTemperature && component == 2) return false;
    return component == 1 || component == 2;
}

bool closed_lambda_is_physical(const SpectralDensity& sd, const ThermalRegime& regime, int component) {
    return has_lambda_closed(sd, regime, component) && sd.cutoff != Cutoff::DrudeLorentz;
}

cplx lambda1_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                    FormVariant variant) {
    require_closed(sd, regime, 1);
    if (t < 0.0) throw DomainError("lambda_closed: t < 0");
    const ModeConstants mc = mode_constants(sys);
    const double g = sd.gamma, hb = sys.hbar, L = sd.lambda, Om = regime.omega_th;
    const double a = mc.a_prime, b = mc.b_prime, M = mc.m_coef, P = mc.p_coef;
    if (t == 0.0 || g == 0.0) return 0.0;
    const GContext ctx{L, Om, t};
    const bool high = regime.kind == Regime::HighTemperature;
    switch (sd.cutoff) {
        case Cutoff::Abrupt: {
            if (!(L > a)) throw DomainError("lambda_closed: requires Lambda > A'");
            auto si = [](double x) { return sin_integral(cplx(x)).real(); };
            if (high) {
                return g * Om / (2.0 * hb) *
                       (-M * si(t * (a - L)) - P * si(t * (b - L)) + M * si(t * (a + L)) + P * si(t * (b + L)));
            }
            const double s2 = std::sin(0.5 * L * t);
            const double one_minus_cos = 2.0 * s2 * s2;  // 1 - cos(L t)
            const double body = 2.0 * one_minus_cos * (M * std::cos(a * t) + P * std::cos(b * t)) +
                                M * a * t * (si((L - a) * t) + 2.0 * si(a * t) - si((L + a) * t)) +
                                P * b * t * (si((L - b) * t) + 2.0 * si(b * t) - si((L + b) * t));
            return g / hb * body / (2.0 * t);
        }
        case Cutoff::DrudeLorentz:
            if (high) return g * kPi / (2.0 * hb) * (M * g1(a, ctx, variant) + P * g1(b, ctx, variant));
            return g * kPi * L * L / (2.0 * hb) * cot_checked(L / Om) *
                   (M * g3(a, ctx, variant) + P * g3(b, ctx, variant));
        case Cutoff::Exponential:
            if (high) return g * Om / (2.0 * hb) * (M * g5(a, ctx) + P * g5(b, ctx));
            return 1.0 / (2.0 + 2.0 * t * t * L * L) * (g / hb) *
                   (M * g7(a, a, ctx, variant) + P * g7(b, a, ctx, variant));
    }
    throw UnsupportedError("lambda_closed: unsupported cutoff");
}

cplx lambda2_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                    FormVariant variant) {
    require_closed(sd, regime, 2);
    if (t < 0.0) throw DomainError("lambda_closed: t < 0");
    const ModeConstants mc = mode_constants(sys);
    const double g = sd.gamma, hb = sys.hbar, L = sd.lambda, Om = regime.omega_th;
    const double a = mc.a_prime, b = mc.b_prime, G = mc.g_coef;
    if (t == 0.0 || g == 0.0 || G == 0.0) return 0.0;
    const GContext ctx{L, Om, t};
    const cplx A = I * a, B = I * b;
    // The printed forms drop the 1/(AB) of F2; with A = iA', B = iB' that is -1/(A'B').
    const double undo = variant == FormVariant::Corrected ? -1.0 / (a * b) : 1.0;
    const bool high = regime.kind == Regime::HighTemperature;
    switch (sd.cutoff) {
        case Cutoff::Abrupt: {
            if (!(L > a)) throw DomainError("lambda_closed: requires Lambda > A'");
            cplx ka, kb;
            if (variant == FormVariant::Corrected) {
                ka = ci_difference(L - a, L + a, t);
                kb = ci_difference(L - b, L + b, t);
            } else {
                ka = Ci(t * (L - a)) - Ci(t * (L + a)) + std::log((L + a) / (L - a));
                kb = Ci(t * (L - b)) - Ci(t * (L + b)) + std::log((L + b) / (L - b));
            }
            return -I * Om * g / (2.0 * hb) * G * (B * ka - A * kb) * undo;
        }
        case Cutoff::DrudeLorentz:
            if (high) return I * g * G * kPi / (2.0 * hb) * (g2(A, b, ctx, variant) - g2(B, a, ctx, variant)) * undo;
            return -I * g * kPi * L * L * G / (2.0 * hb) * cot_checked(L / Om) *
                   (g4(A, b, ctx, variant) - g4(B, a, ctx, variant)) * undo;
        case Cutoff::Exponential:
            if (high)
                return -I * g * G * Om / (2.0 * hb) * (g6(A, b, ctx, variant) - g6(B, a, ctx, variant)) * undo;
            return 1.0 / (2.0 + 2.0 * t * t * L * L) * (g * G / hb) *
                   (g8(A, b, ctx, variant) - g8(B, a, ctx, variant)) * undo;
    }
    throw UnsupportedError("lambda_closed: unsupported cutoff");
}

LambdaPair lambda_closed(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime, double t,
                         FormVariant variant) {
    LambdaPair out;
    out.t = t;
    out.method = Method::ClosedForm;
    out.lambda1 = lambda1_closed(sys, sd, regime, t, variant);
    out.lambda2 = lambda2_closed(sys, sd, regime, t, variant);
    return out;
}

const std::vector<Finding>& documented_findings() {
    static const std::vector<Finding> list = {
        {"abrupt-high-l2-scale", Cutoff::Abrupt, Regime::HighTemperature, 2,
         "printed lambda_2 equals -A'B' times the defining integral (1/(AB) of F2 dropped)"},
        {"dl-high-kernel", Cutoff::DrudeLorentz, Regime::HighTemperature, 0,
         "cot(L/Omega)cosh(L tau) kernel does not equal int J coth cos; lambdas disagree with same-regime quadrature"},
        {"dl-low-kernel", Cutoff::DrudeLorentz, Regime::LowTemperature, 0,
         "cot(L/Omega)cosh(L tau) kernel does not equal int J cos; lambdas disagree with same-regime quadrature"},
        {"dl-high-g1", Cutoff::DrudeLorentz, Regime::HighTemperature, 1,
         "g1: cos(L t) should be cosh(L t); second bracket lacks a factor L^2"},
        {"dl-high-g2", Cutoff::DrudeLorentz, Regime::HighTemperature, 2,
         "g2: sin(L t) should be sinh(L t); second bracket lacks L^2; overall -A'B' factor"},
        {"dl-low-g3", Cutoff::DrudeLorentz, Regime::LowTemperature, 1,
         "g3 is int_0^t lambda_1 dt' (time-integrated), not lambda_1"},
        {"dl-low-g4", Cutoff::DrudeLorentz, Regime::LowTemperature, 2,
         "g4 is int_0^t lambda_2 dt' (time-integrated); overall -A'B' factor"},
        {"exp-high-g6", Cutoff::Exponential, Regime::HighTemperature, 2,
         "g6: Si(v'/L) should be Shi(v'/L); overall -A'B' factor"},
        {"exp-low-g7", Cutoff::Exponential, Regime::LowTemperature, 1, "g7: trailing factor A' should be z"},
        {"exp-low-g8", Cutoff::Exponential, Regime::LowTemperature, 2,
         "g8: Si(v'/L) should be Shi(v'/L); overall -A'B' factor"},
    };
    return list;
}

LambdaPair lambda_from_kernel(const SystemParams& sys, const std::function<cplx(double)>& nu, double t,
                              double osc_period, double rel) {
    LambdaPair out;
    out.t = t;
    if (t < 0.0) throw DomainError("lambda: t < 0");
    if (t == 0.0) return out;
    const Weights w(sys);
    const double w_max = std::min(0.5 * osc_period, 1.0 / std::max(w.mc.a_prime, 1e-300));
    const double t_small = std::isfinite(osc_period) ? 1e-3 * osc_period : 1e-3 * t;
    const auto edges = quad::panel_edges(t, t_small, w_max);
    auto f = [&](double tau) {
        const cplx v = nu(tau);
        const double f1 = w.f1(tau), f2 = w.f2(tau);
        return std::array<double, 4>{v.real() * f1, v.imag() * f1, v.real() * f2, v.imag() * f2};
    };
    const quad::Tolerance tol{rel, 0.0, 1.0, 4000, {}};
    std::array<double, 4> acc{};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto r = quad::integrate<4>(f, edges[i], edges[i + 1], tol);
        for (int k = 0; k < 4; ++k) {
            acc[k] += r.value[k];
            out.est_error += r.error[k];
        }
    }
    out.lambda1 = cplx(acc[0], acc[1]) / sys.hbar;
    out.lambda2 = cplx(acc[2], acc[3]) / sys.hbar;
    out.est_error /= sys.hbar;
    return out;
}

LambdaPair lambda_quadrature(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                             double t, double rel) {
    sd.validate();
    regime.validate();
    CumulativeLambda engine(sys, sd, regime, CurveMethod::Quadrature, {rel});
    const auto s = engine.run({t});
    if (s[0].failed) throw NonConvergenceError("lambda_quadrature: " + s[0].message);
    LambdaPair out;
    out.t = t;
    out.lambda1 = s[0].lambda1;
    out.lambda2 = s[0].lambda2;
    out.est_error = s[0].error;
    return out;
}

CumulativeLambda::CumulativeLambda(const SystemParams& sys, const SpectralDensity& sd, const ThermalRegime& regime,
                                   CurveMethod method, CumulativeOptions opts)
    : sys_(sys), sd_(sd), regime_(regime), method_(method), opts_(opts) {
    sys_.validate();
    sd_.validate();
    regime_.validate();
}

std::vector<CumulativeSample> CumulativeLambda::run(const std::vector<double>& grid) const {
    std::vector<CumulativeSample> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i].t = grid[i];
        if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1]))
            throw DomainError("curve grid must be non-negative and non-decreasing");
    }
    if (grid.empty() || grid.back() == 0.0 || sd_.gamma == 0.0) {
        for (auto& s : out) s.method = "quadrature";
        return out;
    }

    const Weights w(sys_);
    const double L = sd_.lambda, hb = sys_.hbar;
    const bool fast = method_ == CurveMethod::ClosedFormWhereValid;
    bool closed_comp[2] = {false, false};
    for (int c = 0; c < 2; ++c) {
        closed_comp[c] = fast && closed_lambda_is_physical(sd_, regime_, c + 1) &&
                         !(sd_.cutoff == Cutoff::Abrupt && !(L > w.mc.a_prime));
    }
    const bool need_kernel = !(closed_comp[0] && closed_comp[1]);
    const bool closed_kernel = fast && closed_kernel_matches_definition(sd_, regime_);
    const double kernel_window = closed_kernel ? closed_kernel_window(sd_, regime_) : 0.0;
    bool used_quad_kernel = false, used_closed_kernel = false;

    auto nu = [&](double tau) {
        if (closed_kernel && tau <= kernel_window) {
            try {
                const double v = noise_kernel_closed(sd_, regime_, tau).value;
                used_closed_kernel = true;
                return v;
            } catch (const Error&) {
            }
        }
        used_quad_kernel = true;
        return noise_kernel_estimate(sd_, regime_, tau, 0.1 * opts_.rel).value;
    };
    auto closed_lambda = [&](int c, double tau) -> double {
        if (tau == 0.0) return 0.0;
        const cplx v = c == 0 ? lambda1_closed(sys_, sd_, regime_, tau, FormVariant::Corrected)
                              : lambda2_closed(sys_, sd_, regime_, tau, FormVariant::Corrected);
        return v.real();
    };
    auto f = [&](double tau) {
        std::array<double, 6> r{};
        if (need_kernel) {
            const double v = nu(tau);
            if (!closed_comp[0]) {
                r[0] = v * w.f1(tau);
                r[2] = tau * r[0];
            }
            if (!closed_comp[1]) {
                r[1] = v * w.f2(tau);
                r[3] = tau * r[1];
            }
        }
        if (closed_comp[0]) r[4] = closed_lambda(0, tau);
        if (closed_comp[1]) r[5] = closed_lambda(1, tau);
        return r;
    };

    // Panel widths: resolve the mode oscillation and, for the abrupt cutoff, the
    // undamped oscillation of nu at Lambda.
    double w_max = 1.0 / std::max(w.mc.a_prime, 1e-300);
    if (sd_.cutoff == Cutoff::Abrupt) w_max = std::min(w_max, kPi / L);
    std::vector<double> forced;
    for (double t : grid)
        if (t > 0.0 && (forced.empty() || t > forced.back())) forced.push_back(t);
    const auto edges = quad::panel_edges(grid.back(), 1e-3 / L, w_max, forced);

    quad::Tolerance tol{opts_.rel, 1e-300, 1.0, 2000, std::vector<double>(6, 0.0)};
    std::array<double, 6> acc{}, acc_l1{};
    const double t_end = grid.back();
    constexpr double kKernelNoise = 1e-13;
    double nu0 = 0.0;
    // Only sets the round-off floor; if the kernel cannot be evaluated here the
    // floor is dropped and the first panel reports the failure.
    for (double tau : {0.0, 1e-3 / L}) {
        if (!need_kernel || (std::isfinite(nu0) && nu0 > 0.0)) break;
        try {
            nu0 = std::abs(nu(tau));
        } catch (const Error&) {
            nu0 = 0.0;
        }
    }
    if (!std::isfinite(nu0)) nu0 = 0.0;
    double err = 0.0;
    std::size_t gi = 0;
    while (gi < grid.size() && grid[gi] == 0.0) {
        out[gi].method = need_kernel ? "quadrature" : "closed";
        ++gi;
    }
    auto method_label = [&]() -> std::string {
        if (!need_kernel) return "closed";
        if (closed_comp[0] || closed_comp[1] || used_closed_kernel) return used_quad_kernel || closed_comp[0] != closed_comp[1] ? "mixed" : "closed";
        return "quadrature";
    };
    auto emit = [&](double t) {
        CumulativeSample s;
        s.t = t;
        double lam[2], integ[2];
        for (int c = 0; c < 2; ++c) {
            if (closed_comp[c]) {
                lam[c] = closed_lambda(c, t);
                integ[c] = acc[4 + c];
            } else {
                lam[c] = acc[c] / hb;
                integ[c] = (t * acc[c] - acc[2 + c]) / hb;
            }
        }
        s.lambda1 = lam[0];
        s.lambda2 = lam[1];
        s.int_lambda1 = integ[0];
        s.int_lambda2 = integ[1];
        s.error = err;
        s.method = method_label();
        return s;
    };

    std::string failure;
    for (std::size_t i = 0; i + 1 < edges.size() && gi < grid.size(); ++i) {
        try {
            // Once a component has accumulated its bulk, later panels where the kernel has
            // decayed only need to resolve their share of rel * int|f|.
            const double width = edges[i + 1] - edges[i], share = width / t_end;
            // Kernel round-off sits near eps * nu(0); no panel can resolve below it.
            const double f2_sup =
                w.mc.g_coef * std::min(2.0 * edges[i + 1], 1.0 / w.mc.a_prime + 1.0 / std::max(w.mc.b_prime, 1e-300));
            const double noise = kKernelNoise * nu0 * width;
            const double sup[6] = {1.0, f2_sup, edges[i + 1], edges[i + 1] * f2_sup, 0.0, 0.0};
            for (int k = 0; k < 6; ++k)
                tol.abs_each[k] = std::max(opts_.rel * acc_l1[k] * share, noise * sup[k]);
            // Closed lambdas cancel down to ~1e-13 of the lambda scale; resolve each
            // to that level of the combined exponent rather than its own size.
            if (closed_comp[0] || closed_comp[1]) {
                double scale = 0.0;
                for (int c = 0; c < 2; ++c)
                    scale += closed_comp[c] ? std::abs(closed_lambda(c, edges[i + 1])) : acc_l1[c] / std::max(t_end, 1e-300) / hb;
                for (int c = 0; c < 2; ++c)
                    if (closed_comp[c]) tol.abs_each[4 + c] = std::max(tol.abs_each[4 + c], 1e-12 * scale * width);
            }
            const auto r = quad::integrate<6>(f, edges[i], edges[i + 1], tol);
            for (int k = 0; k < 6; ++k) {
                acc[k] += r.value[k];
                acc_l1[k] += r.l1[k];
            }
            err += *std::max_element(r.error.begin(), r.error.end());
        } catch (const std::exception& e) {
            failure = e.what();
            break;
        }
        const double t_hi = edges[i + 1];
        while (gi < grid.size() && grid[gi] <= t_hi * (1.0 + 1e-15)) {
            try {
                out[gi] = emit(grid[gi]);
            } catch (const std::exception& e) {
                failure = e.what();
                break;
            }
            ++gi;
        }
        if (!failure.empty()) break;
    }
    for (; gi < grid.size(); ++gi) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out[gi].t = grid[gi];
        out[gi].lambda1 = out[gi].lambda2 = out[gi].int_lambda1 = out[gi].int_lambda2 = cplx(nan, nan);
        out[gi].failed = true;
        out[gi].message = failure.empty() ? "integration stopped" : failure;
        out[gi].method = method_label();
    }
    return out;
}

}  // namespace qbm
