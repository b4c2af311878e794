// quadrature.hpp - adaptive Gauss-Kronrod and half-period Fourier integrals

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm::quad {

struct Tolerance {
    double rel = 1e-10;
    double abs = 0.0;
    // Weight of int|f| in the reference magnitude; 1 measures error against
    // the L1 norm, which is what oscillatory panels need.
    double l1_weight = 0.0;
    std::size_t max_intervals = 4000;
    // Optional per-component absolute floors, combined with abs by max.
    std::vector<double> abs_each;
};

template <std::size_t N>
struct ResultN {
    std::array<double, N> value{};
    std::array<double, N> error{};
    std::array<double, N> l1{};
    std::size_t evals = 0;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a, b;
    std::array<double, N> value, error, l1;
    double worst;
};

// One G7K15 panel with QUADPACK's error scaling, per component.
template <std::size_t N, class F>
Panel<N> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<std::array<double, N>, 15> fv;
    fv[7] = f(c);
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    Panel<N> p{a, b, {}, {}, {}, 0.0};
    for (std::size_t k = 0; k < N; ++k) {
        double rk = fv[7][k] * kWgk[7];
        double rg = fv[7][k] * kWg[3];
        double rabs = std::abs(rk);
        for (int j = 0; j < 7; ++j) {
            const double s = fv[j][k] + fv[14 - j][k];
            rk += kWgk[j] * s;
            rabs += kWgk[j] * (std::abs(fv[j][k]) + std::abs(fv[14 - j][k]));
            if (j % 2 == 1) rg += kWg[j / 2] * s;
        }
        const double mean = 0.5 * rk;
        double rasc = kWgk[7] * std::abs(fv[7][k] - mean);
        for (int j = 0; j < 7; ++j)
            rasc += kWgk[j] * (std::abs(fv[j][k] - mean) + std::abs(fv[14 - j][k] - mean));
        rasc *= std::abs(h);
        double err = std::abs((rk - rg) * h);
        if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
        const double tiny = 50.0 * std::numeric_limits<double>::epsilon() * rabs * std::abs(h);
        if (tiny > err) err = tiny;
        p.value[k] = rk * h;
        p.error[k] = err;
        p.l1[k] = rabs * std::abs(h);
    }
    return p;
}

}  // namespace detail

// Globally adaptive G7K15 integration of a vector-valued integrand.
template <std::size_t N, class F>
ResultN<N> integrate(F&& f, double a, double b, const Tolerance& tol) {
    using P = detail::Panel<N>;
    ResultN<N> res;
    if (a == b) return res;
    auto worst = [&](P& p) {
        double w = 0.0;
        for (std::size_t k = 0; k < N; ++k) w = std::max(w, p.error[k]);
        p.worst = w;
    };
    auto cmp = [](const P& x, const P& y) { return x.worst < y.worst; };
    std::priority_queue<P, std::vector<P>, decltype(cmp)> heap(cmp);
    P first = detail::gk15<N>(f, a, b);
    worst(first);
    heap.push(first);
    res.evals = 15;
    std::array<double, N> val = first.value, err = first.error, l1 = first.l1;

    auto converged = [&]() {
        for (std::size_t k = 0; k < N; ++k) {
            const double ref = std::max(std::abs(val[k]), tol.l1_weight * l1[k]);
            const double floor = k < tol.abs_each.size() ? std::max(tol.abs, tol.abs_each[k]) : tol.abs;
            if (err[k] > std::max(floor, tol.rel * ref)) return false;
        }
        return true;
    };
    while (!converged()) {
        if (heap.size() >= tol.max_intervals)
            throw NonConvergenceError("integrate: interval limit reached");
        P p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) throw NonConvergenceError("integrate: interval underflow");
        P l = detail::gk15<N>(f, p.a, m);
        P r = detail::gk15<N>(f, m, p.b);
        worst(l);
        worst(r);
        res.evals += 30;
        for (std::size_t k = 0; k < N; ++k) {
            val[k] += l.value[k] + r.value[k] - p.value[k];
            err[k] += l.error[k] + r.error[k] - p.error[k];
            l1[k] += l.l1[k] + r.l1[k] - p.l1[k];
        }
        heap.push(l);
        heap.push(r);
    }
    // Re-sum from the panels to shed drift from the running updates.
    val = {};
    err = {};
    l1 = {};
    while (!heap.empty()) {
        const P& p = heap.top();
        for (std::size_t k = 0; k < N; ++k) {
            val[k] += p.value[k];
            err[k] += p.error[k];
            l1[k] += p.l1[k];
        }
        heap.pop();
    }
    res.value = val;
    res.error = err;
    res.l1 = l1;
    return res;
}

template <class F>
Result integrate_scalar(F&& f, double a, double b, const Tolerance& tol) {
    auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
    const auto r = integrate<1>(g, a, b, tol);
    return {r.value[0], r.error[0], r.evals};
}

enum class Trig { Cos, Sin };

struct FourierOptions {
    double upper = std::numeric_limits<double>::infinity();
    double scale = 1.0;       // frequency scale where the amplitude varies
    double tail_start = 0.0;  // amplitude is smooth and monotone beyond this
    double singular_power = 2.0;  // first panel uses omega = b u^p
    double rel = 1e-8;
    double abs = 1e-12;
    std::size_t max_segments = 10000;
};

// int_0^upper amp(w) * cos|sin(w tau) dw. Segments end on zeros of the
// oscillating factor; an infinite tail is summed as an alternating series
// with Euler (repeated averaging) acceleration.
Result fourier_integral(const std::function<double(double)>& amp, Trig trig, double tau,
                        const FourierOptions& opts);

// Panel edges on [0, t_end]: geometric from t_small, width capped at w_max,
// with every forced point (sorted, inside the range) included as an edge.
std::vector<double> panel_edges(double t_end, double t_small, double w_max,
                                const std::vector<double>& forced = {});

// Accelerated limit of an alternating sequence of partial sums.
double euler_average(const std::vector<double>& partial_sums, std::size_t depth);

}  // namespace qbm::quad
