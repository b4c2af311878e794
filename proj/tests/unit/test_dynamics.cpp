#include <doctest.h>

#include <cmath>
#include <random>

#include "qbm/dynamics.hpp"
#include "qbm/errors.hpp"

using namespace qbm;

namespace {

SystemParams random_system(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w0(0.1, 20.0), wc(0.0, 20.0);
    SystemParams s;
    s.omega0 = w0(rng);
    s.omega_c = wc(rng);
    return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("mode constants satisfy the quartic identities") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const SystemParams s = random_system(rng);
        const ModeConstants mc = mode_constants(s);
        const double w2 = s.omega0 * s.omega0;
        CHECK(mc.a_prime >= mc.b_prime);
        CHECK(mc.b_prime >= 0.0);
        CHECK(mc.a_prime * mc.b_prime == doctest::Approx(w2 / 2).epsilon(1e-12));
        CHECK(mc.a_prime * mc.a_prime + mc.b_prime * mc.b_prime ==
              doctest::Approx((2 * w2 + s.omega_c * s.omega_c) / 2).epsilon(1e-12));
        CHECK(mc.m_coef + mc.p_coef == doctest::Approx(1.0).epsilon(1e-14));
    }
    SystemParams fig{1.0, 10.0, 1.0};
    const ModeConstants mc = mode_constants(fig);
    CHECK(mc.root == doctest::Approx(std::sqrt(401.0)));
}

TEST_CASE("degenerate system is rejected") {
    SystemParams s;
    s.omega0 = 0.0;
    s.omega_c = 0.0;
    CHECK_THROWS(s.validate());
    s.m = -1.0;
    s.omega0 = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("F1 against the raw two-mode expression") {
    SystemParams s{1.0, 10.0, 1.0};
    const double S = std::sqrt(4 * 100.0 + 1.0);
    const double a = std::sqrt(200.0 + 1.0 + S) / 2, b = std::sqrt(200.0 + 1.0 - S) / 2;
    // cosh of an imaginary argument, evaluated with complex arithmetic
    const std::complex<double> I(0, 1);
    const double raw = ((S - 1.0) * std::cosh(I * a * 0.1) + (S + 1.0) * std::cosh(I * b * 0.1)).real() / (2 * S);
    CHECK(f_weight(s, 0.1, Weight::F1) == doctest::Approx(raw).epsilon(1e-14));
}

TEST_CASE("F1 is bounded by one") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> t(0.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const SystemParams s = random_system(rng);
        CHECK(std::abs(f_weight(s, t(rng), Weight::F1)) <= 1.0 + 1e-15);
    }
}

TEST_CASE("F2 vanishes as the cyclotron frequency goes to zero") {
    SystemParams s{1.0, 3.0, 1e-8};
    for (double tau : {1e-3, 0.1, 1.0, 10.0, 100.0}) CHECK(std::abs(f_weight(s, tau, Weight::F2)) < 1e-6);
}

TEST_CASE("F2 small-tau series joins the direct form") {
    SystemParams s{1.0, 10.0, 1.0};
    const Weights w(s);
    const double a = w.mc.a_prime;
    const double below = w.f2(0.999 / a), above = w.f2(1.001 / a);
    CHECK(std::abs(above - below) < 1e-2 * std::abs(above));
    CHECK(w.f2(0.0) == 0.0);
}

TEST_CASE("transfer matrix is the identity at zero and reproduces F1, F2") {
    SystemParams s{1.0, 10.0, 1.0};
    CHECK((heisenberg_transfer(s, 0.0) - Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> t(0.0, 5.0);
    for (int i = 0; i < 20; ++i) {
        const SystemParams r = random_system(rng);
        const double tau = t(rng);
        const Matrix4 T = heisenberg_transfer(r, tau);
        CHECK(T(0, 0) == doctest::Approx(f_weight(r, tau, Weight::F1)).epsilon(1e-10).scale(1.0));
        CHECK(T(0, 1) == doctest::Approx(-0.5 * f_weight(r, tau, Weight::F2)).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("transfer matrix columns solve the equations of motion") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> t(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        const SystemParams s = random_system(rng);
        const EomFrequencies f = eom_frequencies(s);
        const double tau = t(rng), h = 1e-4 / (1.0 + mode_constants(s).a_prime);
        const Matrix4 d = (heisenberg_transfer(s, tau + h) - heisenberg_transfer(s, tau - h)) / (2 * h);
        const Matrix4 T = heisenberg_transfer(s, tau);
        Matrix4 A = Matrix4::Zero();
        A(0, 2) = A(1, 3) = 1.0;
        A(2, 0) = A(3, 1) = -f.omega0_sq;
        A(2, 3) = f.omega_c;
        A(3, 2) = -f.omega_c;
        const Matrix4 rhs = A * T;
        CHECK((d - rhs).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("frequency shift is negative and converged in the window") {
    SystemParams s{1.0, 1.0, 0.0};
    s.gamma = 0.05;
    const SpectralDensity sd{1.0, Cutoff::Exponential, 10.0, 0.05};
    const FrequencyShift a = frequency_shift(s, sd, 20.0), b = frequency_shift(s, sd, 40.0);
    CHECK(a.value < 0.0);
    CHECK(std::isfinite(a.value));
    CHECK(std::abs(a.value - b.value) <= 1e-2 * std::abs(b.value));
}

}  // TEST_SUITE
