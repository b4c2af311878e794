#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"

using namespace qbm;

namespace {

// Plain Taylor series, the oracle for the production Si/Ci.
cplx si_taylor(cplx z) {
    cplx sum = 0.0, term = z;  // z^(2k+1)/(2k+1)! with sign
    for (int k = 0; k < 80; ++k) {
        sum += term / double(2 * k + 1);
        term *= -z * z / (double(2 * k + 2) * double(2 * k + 3));
    }
    return sum;
}

cplx ci_taylor(cplx z) {
    cplx sum = 0.0, term = -z * z / 2.0;  // (-1)^k z^(2k)/(2k)!
    for (int k = 1; k < 80; ++k) {
        sum += term / double(2 * k);
        term *= -z * z / (double(2 * k + 1) * double(2 * k + 2));
    }
    return kEulerGamma + std::log(z) + sum;
}

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("Si and Ci match their Taylor series") {
    CHECK(rel_err(sin_integral(1.0), si_taylor(1.0)) < 1e-12);
    CHECK(rel_err(cos_integral(1.0), ci_taylor(1.0)) < 1e-12);
    CHECK(sin_integral(0.0) == cplx(0.0, 0.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0.05, 5.0), arg(-3.1, 3.1);
    for (int i = 0; i < 100; ++i) {
        const cplx z = std::polar(r(rng), i % 4 == 0 ? 0.0 : arg(rng));
        CAPTURE(z);
        CHECK(rel_err(sin_integral(z), si_taylor(z)) < 1e-10);
        CHECK(rel_err(cos_integral(z), ci_taylor(z)) < 1e-10);
    }
}

TEST_CASE("Si is odd and both satisfy Schwarz reflection") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const cplx z(u(rng), u(rng) / 4.0);
        CAPTURE(z);
        CHECK(std::abs(sin_integral(-z) + sin_integral(z)) <= 1e-13 * std::abs(sin_integral(z)) + 1e-15);
        CHECK(rel_err(sin_integral(std::conj(z)), std::conj(sin_integral(z))) < 1e-13);
        if (z.imag() != 0.0) CHECK(rel_err(cos_integral(std::conj(z)), std::conj(cos_integral(z))) < 1e-13);
    }
}

TEST_CASE("Ci branch cut and Cin relation") {
    const double x = 2.5;
    CHECK(rel_err(cos_integral(-x), cos_integral(x) + cplx(0.0, kPi)) < 1e-13);
    const cplx z(3.0, 1.0);
    CHECK(rel_err(cos_integral(z), kEulerGamma + std::log(z) - cin_integral(z)) < 1e-13);
    CHECK_THROWS_AS(cos_integral(0.0), DomainError);
}

TEST_CASE("large-argument Si/Ci approach their limits") {
    CHECK(std::abs(sin_integral(1e4).real() - kPi / 2) < 2e-4);
    CHECK(std::abs(cos_integral(1e4).real()) < 2e-4);
}

TEST_CASE("Shi is -i Si(ix)") {
    for (double x : {0.1, 1.0, 4.0, 12.0}) CHECK(rel_err(sinh_integral(x), cplx(0, -1) * sin_integral(cplx(0, x))) < 1e-12);
}

TEST_CASE("Gamma recurrence and half-integer values") {
    const double sqrt_pi = std::sqrt(kPi);
    CHECK(std::abs(gamma_fn(0.5) * gamma_fn(0.5) - kPi) < 1e-12);
    CHECK(gamma_fn(2.5) == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-14));
    for (double x : {0.3, 1.7, 4.2, 9.5}) CHECK(gamma_fn(x + 1) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(-2.0), PoleError);
}

TEST_CASE("erf family") {
    // Composite Simpson on (2/sqrt(pi)) exp(-t^2), 2e4 panels.
    const int n = 20000;
    double s = 1.0 + std::exp(-1.0);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * std::exp(-std::pow(double(i) / n, 2));
    const double simpson = 2.0 / std::sqrt(kPi) * s / (3.0 * n);
    CHECK(erf_family(1.0, ErfKind::Erf) == doctest::Approx(simpson).epsilon(1e-12));

    for (double x = -6.0; x <= 6.0; x += 0.25)
        CHECK(std::abs(erf_family(x, ErfKind::Erf) + erf_family(x, ErfKind::Erfc) - 1.0) < 1e-14);
    CHECK(erf_family(1.0, ErfKind::Erfi) == doctest::Approx(1.6504257587975428).epsilon(1e-13));
}

TEST_CASE("Lerch Phi against partial sums") {
    auto partial = [](double z, double s, double a) {
        long double sum = 0.0L, zk = 1.0L;
        for (int k = 0; k < 1000000 && std::fabs((double)zk) > 1e-30; ++k, zk *= z) sum += zk / std::pow((long double)(k + a), (long double)s);
        return (double)sum;
    };
    CHECK(lerch_phi(0.3, 1.0, 1.7).real() == doctest::Approx(partial(0.3, 1.0, 1.7)).epsilon(1e-12));

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uz(-0.9, 0.9), ua(0.2, 6.0), us(0.5, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double z = uz(rng), a = ua(rng), s = us(rng);
        CAPTURE(z);
        CAPTURE(a);
        CHECK(lerch_phi(z, s, a).real() == doctest::Approx(partial(z, s, a)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lerch_phi(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("1F2 against a 50-digit partial sum") {
    using big = boost::multiprecision::cpp_bin_float_50;
    const big a = big(3) / 4, b1 = big(1) / 2, b2 = big(7) / 4, z = big(-1) / 4;
    big term = 1, sum = 1;
    for (int k = 0; k < 200; ++k) {
        term *= (a + k) / ((b1 + k) * (b2 + k) * (k + 1)) * z;
        sum += term;
    }
    const auto r = hypergeometric_pfq({{0.75}, {0.5, 1.75}}, -0.25);
    CHECK(r.value == doctest::Approx(sum.convert_to<double>()).epsilon(1e-14));
    CHECK(r.error_bound >= 0.0);
}

TEST_CASE("pFq is stable under doubling the truncation order") {
    for (double x : {-0.25, -4.0, -25.0, 3.0}) {
        const PFQParams p{{0.75}, {0.5, 1.75}};
        const auto r = hypergeometric_pfq(p, x);
        const auto r2 = hypergeometric_pfq(p, x, {10000, 2 * r.terms});
        CAPTURE(x);
        CHECK(std::abs(r2.value - r.value) <= 1e-8 * std::abs(r.value));
    }
    CHECK(hypergeometric_pfq({{1.0}, {2.0}}, 1.0).value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK_THROWS_AS(hypergeometric_pfq({{1.0}, {-2.0}}, 0.5), DomainError);
}

}  // TEST_SUITE
