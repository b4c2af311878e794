#include <doctest.h>

#include <cmath>
#include <random>

#include "qbm/decoherence.hpp"
#include "qbm/errors.hpp"

using namespace qbm;

namespace {

SystemParams system(double w0, double wc, double th) {
    SystemParams s;
    s.omega0 = w0;
    s.omega_c = wc;
    s.omega_th = th;
    return s;
}

}  // namespace

TEST_SUITE("decoherence") {

TEST_CASE("high-T rate formula") {
    SystemParams s = system(10.0, 1.0, 1e3);
    CHECK(hightemp_rate(s, {1.0, 1.0}) == doctest::Approx(1e3).epsilon(1e-15));
    CHECK(hightemp_rate(s, {0.0, 0.0}) == 0.0);
    const double r1 = hightemp_rate(s, {0.3, 0.7});
    s.omega_c = 10.0;
    CHECK(hightemp_rate(s, {0.3, 0.7}) == r1);
}

TEST_CASE("low-T power law") {
    const SystemParams s = system(10.0, 1.0, 0.0);
    const PowerLaw p = lowtemp_powerlaw(s, {1.0, Cutoff::Abrupt, 1e3, 1.0}, {1.0, 1.0});
    CHECK(p.exponent == 2.0);
    CHECK(p.c_const == doctest::Approx(std::exp(p.log_c)));
    CHECK(std::isfinite(p.log_c));
    CHECK_THROWS_AS(lowtemp_powerlaw(s, {1.0, Cutoff::Abrupt, 5.0, 1.0}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(lowtemp_powerlaw(s, {1.0, Cutoff::Exponential, 1e3, 1.0}, {1.0, 1.0}), Error);
}

TEST_CASE("magnitude is one at t = 0 and without coupling") {
    const SystemParams s = system(10.0, 1.0, 10.0);
    for (Cutoff c : {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential}) {
        const CurveSeries k = curve(s, {1.0, c, 20.0, 1.0}, {Regime::Exact, 10.0}, {1.0, 1.0}, {0.0, 0.1});
        CHECK(k.magnitude[0] == 1.0);
        CHECK(k.phase[0] == 0.0);
        const CurveSeries z = curve(s, {1.0, c, 20.0, 0.0}, {Regime::HighTemperature, 10.0}, {1.0, 1.0}, {0.0, 0.1, 1.0});
        for (double m : z.magnitude) CHECK(m == 1.0);
    }
}

TEST_CASE("high-T magnitude is non-increasing") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> w0(0.5, 10.0), wc(0.0, 10.0), th(1.0, 50.0), L(10.0, 100.0), d(-1.5, 1.5);
    const Cutoff cut[3] = {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential};
    for (int i = 0; i < 20; ++i) {
        const SystemParams s = system(w0(rng), wc(rng), th(rng));
        const SpectralDensity sd{1.0, cut[i % 3], L(rng), 0.2};
        const auto grid = log_grid(1e-3, 0.5, 25);
        const CurveSeries c = curve(s, sd, {Regime::HighTemperature, s.omega_th}, {d(rng), d(rng)}, grid);
        CAPTURE(i);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            CHECK(c.magnitude[k] <= c.magnitude[k - 1] * (1.0 + 1e-12));
            CHECK(c.magnitude[k] > 0.0);
        }
    }
}

TEST_CASE("separation symmetries") {
    const SystemParams s = system(10.0, 1.0, 10.0);
    const SpectralDensity sd{1.0, Cutoff::Exponential, 20.0, 1.0};
    const ThermalRegime ex{Regime::Exact, 10.0};
    const DecoherenceExponent a = exponents(s, sd, ex, {0.4, 1.3}, 0.3);
    const DecoherenceExponent b = exponents(s, sd, ex, {1.3, 0.4}, 0.3);
    const DecoherenceExponent c = exponents(s, sd, ex, {0.4, -1.3}, 0.3);
    CHECK(a.d1 == b.d1);
    CHECK(a.d2 == b.d2);
    CHECK(a.d1 == c.d1);
    CHECK(a.d2 == -c.d2);
}

TEST_CASE("underflow clamps with a flag but keeps the log") {
    const DensityRatio r = ratio_from_exponent({cplx(800.0, 0.0), cplx(0.0, 0.5), 1.0});
    CHECK(r.clamped);
    CHECK(r.magnitude == kMagnitudeFloor);
    CHECK(r.log_magnitude == -800.0);
    const DensityRatio ok = ratio_from_exponent({cplx(2.0, 0.0), cplx(0.0, 0.0), 1.0});
    CHECK_FALSE(ok.clamped);
    CHECK(ok.magnitude == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("purely imaginary D2 only moves the phase") {
    const DensityRatio r = ratio_from_exponent({cplx(0.0, 0.0), cplx(0.0, 0.75), 1.0});
    CHECK(r.magnitude == 1.0);
    CHECK(std::abs(r.phase) == doctest::Approx(0.75));
}

// lambda1 tends to gamma Omega int_0^inf sin(x)/x dx = pi gamma Omega / 2, so the
// exponent grows at pi times the closed-form rate (see the rate check in the acceptance suite).
TEST_CASE("abrupt high-T exponent grows at the limit of the kernel integral") {
    const SystemParams s = system(10.0, 1.0, 1e3);
    const SpectralDensity sd{1.0, Cutoff::Abrupt, 1e3, 1.0};
    const ThermalRegime hi{Regime::HighTemperature, 1e3};
    const CurveSeries c = curve(s, sd, hi, {1.0, 1.0}, {0.5, 1.0}, CurveMethod::ClosedFormWhereValid);
    const double slope = (c.d1[1] - c.d1[0]).real() / 0.5;
    CHECK(slope == doctest::Approx(kPi * hightemp_rate(s, {1.0, 1.0})).epsilon(1e-3));
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-3, 1.0, 4);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1.0);
    CHECK(g[1] == doctest::Approx(1e-2));
    const auto d = default_grid({1.0, Cutoff::Abrupt, 1e3, 1.0});
    CHECK(d.size() == 200);
    CHECK(d.front() == doctest::Approx(1e-6));
    CHECK(d.back() == doctest::Approx(0.7));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), DomainError);
}

}  // TEST_SUITE
