#include <doctest.h>

#include <cmath>

#include "qbm/bath.hpp"
#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

using namespace qbm;

TEST_SUITE("bath") {

TEST_CASE("Ohmic spectral densities converge at a very high cutoff") {
    const double L = 1e6;
    double worst = 0.0;
    for (double w = 1.0; w <= 1e3; w *= 1.2) {
        const double ja = spectral_density({1.0, Cutoff::Abrupt, L, 1.0}, w);
        const double jd = spectral_density({1.0, Cutoff::DrudeLorentz, L, 1.0}, w);
        const double je = spectral_density({1.0, Cutoff::Exponential, L, 1.0}, w);
        worst = std::max({worst, std::abs(ja - jd) / ja, std::abs(ja - je) / ja, std::abs(jd - je) / jd});
    }
    CHECK(worst < 2e-3);
    CHECK(spectral_density({1.0, Cutoff::Abrupt, 10.0, 1.0}, 11.0) == 0.0);
}

TEST_CASE("type invariants and name round trip") {
    CHECK_THROWS_AS((SpectralDensity{0.0, Cutoff::Abrupt, 1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((SpectralDensity{1.0, Cutoff::Abrupt, -1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((ThermalRegime{Regime::HighTemperature, 0.0}.validate()), DomainError);
    CHECK_NOTHROW((ThermalRegime{Regime::LowTemperature, 0.0}.validate()));
    for (Cutoff c : {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential}) CHECK(cutoff_from_string(to_string(c)) == c);
    for (Regime r : {Regime::Exact, Regime::HighTemperature, Regime::LowTemperature})
        CHECK(regime_from_string(to_string(r)) == r);
}

TEST_CASE("abrupt Ohmic high-T kernel is gamma Omega sin(Lambda tau)/tau") {
    const SpectralDensity sd{1.0, Cutoff::Abrupt, 1e3, 1.0};
    const ThermalRegime hi{Regime::HighTemperature, 1e3};
    const double want = 1e6 * std::sin(10.0) / 10.0;
    CHECK(noise_kernel_quadrature(sd, hi, 0.01) == doctest::Approx(want).epsilon(1e-6));
    CHECK(noise_kernel_closed_value(sd, hi, 0.01) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("abrupt high-T closed form equals quadrature across four decades") {
    const SpectralDensity sd{1.0, Cutoff::Abrupt, 10.0, 1.0};
    const ThermalRegime hi{Regime::HighTemperature, 5.0};
    for (double tau = 1e-4; tau <= 10.0; tau *= 1.9) {
        CAPTURE(tau);
        const double q = noise_kernel_quadrature(sd, hi, tau), c = noise_kernel_closed_value(sd, hi, tau);
        CHECK(std::abs(q - c) <= 1e-6 * std::abs(c) + 1e-9 * 50.0);
    }
}

TEST_CASE("dissipation kernels against analytic antiderivatives") {
    const double L = 10.0, tau = 1.0;
    const double abrupt = (std::sin(L * tau) - L * tau * std::cos(L * tau)) / (tau * tau);
    CHECK(dissipation_kernel_quadrature({1.0, Cutoff::Abrupt, L, 1.0}, tau) == doctest::Approx(abrupt).epsilon(1e-8));
    const double expo = 2.0 * L * L * L * tau / std::pow(1.0 + L * L * tau * tau, 2);
    CHECK(dissipation_kernel_quadrature({1.0, Cutoff::Exponential, L, 1.0}, tau) == doctest::Approx(expo).epsilon(1e-8));
}

TEST_CASE("low-T kernel is bounded by the exact kernel at tau = 0") {
    for (double s : {0.5, 1.0, 1.5}) {
        const SpectralDensity sd{s, Cutoff::Exponential, 20.0, 1.0};
        const double lo = noise_kernel_quadrature(sd, {Regime::LowTemperature, 0.0}, 0.0);
        const double ex = noise_kernel_quadrature(sd, {Regime::Exact, 2.0}, 0.0);
        CAPTURE(s);
        CHECK(lo > 0.0);
        CHECK(lo <= ex);
    }
}

TEST_CASE("noise integrand is even and dissipation integrand odd in tau") {
    const SpectralDensity sd{1.5, Cutoff::DrudeLorentz, 20.0, 1.0};
    const ThermalRegime ex{Regime::Exact, 3.0};
    for (double w : {0.1, 1.0, 7.0, 40.0})
        for (double tau : {0.05, 0.7, 3.0}) {
            CHECK(noise_amplitude(sd, ex, w) * std::cos(w * tau) == noise_amplitude(sd, ex, w) * std::cos(-w * tau));
            CHECK(spectral_density(sd, w) * std::sin(w * tau) == -(spectral_density(sd, w) * std::sin(-w * tau)));
        }
}

TEST_CASE("kernel is homogeneous of degree one in the coupling") {
    for (Cutoff c : {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential}) {
        SpectralDensity sd{1.0, c, 20.0, 0.7};
        const ThermalRegime ex{Regime::Exact, 4.0};
        const double k1 = noise_kernel_quadrature(sd, ex, 0.3);
        sd.gamma *= 2.0;
        const double k2 = noise_kernel_quadrature(sd, ex, 0.3);
        CAPTURE(to_string(c));
        CHECK(std::abs(k2 - 2.0 * k1) <= 1e-12 * std::abs(k2));
    }
}

TEST_CASE("published closed kernels match quadrature inside their windows") {
    for (Cutoff c : {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential})
        for (double s : {0.5, 1.0, 1.5})
            for (Regime r : {Regime::HighTemperature, Regime::LowTemperature}) {
                const SpectralDensity sd{s, c, 20.0, 1.0};
                const ThermalRegime reg{r, 5.0};
                if (!has_closed_kernel(sd, reg) || !closed_kernel_matches_definition(sd, reg)) continue;
                const double hi = std::min(closed_kernel_window(sd, reg), 1.0);
                const double lo = 1e-3 / sd.lambda;
                for (int i = 0; i < 20; ++i) {
                    const double tau = lo * std::pow(hi / lo, i / 19.0);
                    const double q = noise_kernel_quadrature(sd, reg, tau), k = noise_kernel_closed_value(sd, reg, tau);
                    CAPTURE(to_string(c));
                    CAPTURE(s);
                    CAPTURE(to_string(r));
                    CAPTURE(tau);
                    CHECK(std::abs(q - k) <= 1e-4 * std::abs(q) + 1e-8 * std::abs(noise_kernel_quadrature(sd, reg, lo)));
                }
            }
}

TEST_CASE("Ohmic Drude-Lorentz printed kernels are flagged") {
    CHECK_FALSE(closed_kernel_matches_definition({1.0, Cutoff::DrudeLorentz, 20.0, 1.0}, {Regime::LowTemperature, 0.01}));
    CHECK(closed_kernel_matches_definition({1.0, Cutoff::Exponential, 20.0, 1.0}, {Regime::LowTemperature, 0.01}));
}

}  // TEST_SUITE

TEST_SUITE("quadrature") {

TEST_CASE("adaptive Gauss-Kronrod integrates smooth and peaked functions") {
    const quad::Tolerance tol{1e-12, 0.0, 0.0, 4000, {}};
    CHECK(quad::integrate_scalar([](double x) { return std::exp(x); }, 0.0, 1.0, tol).value ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    const double peak = quad::integrate_scalar([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, tol).value;
    CHECK(peak == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-11));
}

TEST_CASE("Fourier integral with an oscillating tail") {
    // int_0^inf cos(w tau)/(1+w^2) dw = (pi/2) exp(-tau)
    quad::FourierOptions o;
    o.rel = 1e-10;
    o.abs = 0.0;
    for (double tau : {0.5, 2.0, 6.0}) {
        const auto r = quad::fourier_integral([](double w) { return 1.0 / (1.0 + w * w); }, quad::Trig::Cos, tau, o);
        CHECK(r.value == doctest::Approx(kPi / 2 * std::exp(-tau)).epsilon(1e-8));
    }
}

TEST_CASE("panel edges are ordered, capped and contain forced points") {
    const auto e = quad::panel_edges(2.0, 1e-4, 0.1, {0.333, 1.5});
    CHECK(e.front() == 0.0);
    CHECK(e.back() == 2.0);
    for (std::size_t i = 1; i < e.size(); ++i) {
        CHECK(e[i] > e[i - 1]);
        CHECK(e[i] - e[i - 1] <= 0.1 * (1.0 + 1e-12));
    }
    CHECK(std::find(e.begin(), e.end(), 0.333) != e.end());
    CHECK(std::find(e.begin(), e.end(), 1.5) != e.end());
}

}  // TEST_SUITE
