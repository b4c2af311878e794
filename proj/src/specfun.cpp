#include "qbm/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qbm/errors.hpp"

namespace qbm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Past this the Taylor series loses too many digits and E1 converges quickly.
constexpr double kTaylorReal = 8.0;
constexpr double kMaxExpArg = 700.0;

void check_finite(cplx z, const char* who) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError(std::string(who) + ": non-finite argument");
}

cplx si_taylor(cplx z) {
    const cplx z2 = z * z;
    cplx term = z;
    cplx sum = z;
    const double zabs = std::abs(z);
    for (int k = 1; k < 100000; ++k) {
        term *= -z2 / (double(2 * k) * double(2 * k + 1));
        const cplx add = term / double(2 * k + 1);
        sum += add;
        if (2.0 * k > zabs && std::abs(add) <= 0.25 * kEps * std::abs(sum)) break;
    }
    return sum;
}

cplx cin_taylor(cplx z) {
    const cplx z2 = z * z;
    cplx term = z2 / 2.0;  // z^2/2!
    cplx sum = term / 2.0;
    const double zabs = std::abs(z);
    for (int k = 1; k < 100000; ++k) {
        term *= -z2 / (double(2 * k + 1) * double(2 * k + 2));
        const cplx add = term / double(2 * k + 2);
        sum += add;
        if (2.0 * k > zabs && std::abs(add) <= 0.25 * kEps * std::abs(sum)) break;
    }
    return sum;
}

// E1(w) by the modified Lentz continued fraction; used for |Im w| > 8.
cplx expint_e1(cplx w) {
    const double tiny = 1e-300;
    cplx b = w + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -double(i) * double(i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h * std::exp(-w);
    }
    throw NonConvergenceError("expint_e1: continued fraction did not converge");
}

void check_range(cplx z, const char* who) {
    if (std::abs(z.imag()) > kMaxExpArg)
        throw RangeError(std::string(who) + ": |Im z| too large, exp overflows");
}

}  // namespace

cplx sin_integral(cplx z) {
    check_finite(z, "sin_integral");
    check_range(z, "sin_integral");
    if (z.real() < 0.0) return -sin_integral(-z);
    if (z.real() <= kTaylorReal) return si_taylor(z);
    const cplx iz(-z.imag(), z.real());
    return kPi / 2.0 + (expint_e1(iz) - expint_e1(-iz)) / cplx(0.0, 2.0);
}

cplx cos_integral(cplx z) {
    check_finite(z, "cos_integral");
    if (z == cplx(0.0, 0.0)) throw DomainError("cos_integral: logarithmic singularity at 0");
    check_range(z, "cos_integral");
    if (std::abs(z.real()) <= kTaylorReal) return kEulerGamma + std::log(z) - cin_taylor(z);
    if (z.real() < 0.0) {
        // Ci(z) - Ci(-z) = ln z - ln(-z) on the principal branch.
        return cos_integral(-z) + std::log(z) - std::log(-z);
    }
    const cplx iz(-z.imag(), z.real());
    return -(expint_e1(iz) + expint_e1(-iz)) / 2.0;
}

cplx cin_integral(cplx z) {
    check_finite(z, "cin_integral");
    check_range(z, "cin_integral");
    if (std::abs(z.real()) <= kTaylorReal) return cin_taylor(z);
    if (z.real() < 0.0) return cin_integral(-z);
    return kEulerGamma + std::log(z) - cos_integral(z);
}

double sinh_integral(double x) {
    const cplx si = sin_integral(cplx(0.0, x));
    return si.imag();
}

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
    if (x <= 0.0 && x == std::floor(x)) throw PoleError("gamma_fn: pole at non-positive integer");
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) throw RangeError("gamma_fn: overflow");
    return g;
}

double erf_family(double x, ErfKind kind) {
    if (!std::isfinite(x)) throw DomainError("erf_family: non-finite argument");
    switch (kind) {
        case ErfKind::Erf: return std::erf(x);
        case ErfKind::Erfc: return std::erfc(x);
        case ErfKind::Erfi: break;
    }
    const double x2 = x * x;
    if (x2 > 709.0) throw RangeError("erf_family: erfi overflows");
    // All terms share the sign of x, so the series is cancellation free.
    double term = x;
    double sum = x;
    for (int k = 1; k < 100000; ++k) {
        term *= x2 / k;
        const double add = term / (2 * k + 1);
        sum += add;
        if (k > x2 && std::abs(add) <= 0.25 * kEps * std::abs(sum)) break;
    }
    return 2.0 / std::sqrt(kPi) * sum;
}

cplx lerch_phi(cplx z, double s, double a) {
    check_finite(z, "lerch_phi");
    if (!std::isfinite(s) || !std::isfinite(a)) throw DomainError("lerch_phi: non-finite parameter");
    const double r = std::abs(z);
    if (r >= 1.0) throw DomainError("lerch_phi: |z| >= 1 outside the series domain");
    if (a <= 0.0 && a == std::floor(a)) throw PoleError("lerch_phi: a is a non-positive integer");

    auto power = [&](double k) { return std::pow(cplx(k + a, 0.0), -s); };
    cplx sum = 0.0;
    cplx zk = 1.0;
    constexpr long kMaxTerms = 20000000;
    for (long k = 0; k < kMaxTerms; ++k) {
        sum += zk * power(double(k));
        zk *= z;
        const double next = double(k + 1) + a;
        if (next <= 0.0) continue;
        // Remainder bound: terms from k+1 on shrink at least by q per step.
        const double growth = s >= 0.0 ? 1.0 : std::pow((next + 1.0) / next, -s);
        const double q = r * growth;
        if (q >= 1.0) continue;
        const cplx t_next = zk * power(double(k + 1));
        const double bound = std::abs(t_next) / (1.0 - q);
        if (bound <= 1e-12 * std::abs(sum) || bound < 1e-300) {
            // Geometric tail estimate with the local complex ratio.
            const cplx ratio = z * std::pow(next / (next + 1.0), s);
            return sum + t_next / (1.0 - ratio);
        }
    }
    throw NonConvergenceError("lerch_phi: series did not converge");
}

PFQResult hypergeometric_pfq(const PFQParams& p, double z, const PFQOptions& opts) {
    for (double b : p.lower)
        if (b <= 0.0 && b == std::floor(b))
            throw DomainError("hypergeometric_pfq: lower parameter is a non-positive integer");
    if (!std::isfinite(z)) throw DomainError("hypergeometric_pfq: non-finite argument");

    PFQResult res;
    double sum = 0.0, comp = 0.0;  // Kahan
    double term = 1.0;
    double max_partial = 0.0, abs_sum = 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += std::abs(term);
        max_partial = std::max(max_partial, std::abs(sum));

        double next = term * z / double(k + 1);
        for (double a : p.upper) next *= a + double(k);
        for (double b : p.lower) next /= b + double(k);

        const bool done = next == 0.0 ||
                          (std::abs(next) < 1e-16 * std::abs(sum) && std::abs(next) < std::abs(term));
        if (done && k + 1 >= opts.min_terms) {
            res.error_bound = std::abs(next) + kEps * abs_sum;
            break;
        }
        if (k + 1 >= opts.max_terms)
            throw NonConvergenceError("hypergeometric_pfq: no convergence within term limit");
        term = next;
    }
    res.value = sum;
    res.terms = k + 1;
    if (max_partial > 1e12 * std::abs(sum))
        throw PrecisionLossError("hypergeometric_pfq: cancellation exceeds working precision");
    return res;
}

}  // namespace qbm
