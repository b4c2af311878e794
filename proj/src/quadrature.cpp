#include "qbm/quadrature.hpp"

#include <cmath>

namespace qbm::quad {

double euler_average(const std::vector<double>& partial_sums, std::size_t depth) {
    const std::size_t n = partial_sums.size();
    if (n == 0) return 0.0;
    depth = std::min(depth, n - 1);
    std::vector<double> s(partial_sums.end() - static_cast<std::ptrdiff_t>(depth + 1), partial_sums.end());
    for (std::size_t level = 0; level < depth; ++level)
        for (std::size_t i = 0; i + 1 < s.size() - level; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    return s[0];
}

std::vector<double> panel_edges(double t_end, double t_small, double w_max,
                                const std::vector<double>& forced) {
    std::vector<double> edges{0.0};
    if (!(t_end > 0.0)) return edges;
    t_small = std::min(t_small, t_end);
    std::size_t fi = 0;
    double cur = 0.0;
    while (cur < t_end) {
        double next = cur < t_small ? t_small : std::min(2.0 * cur, cur + w_max);
        next = std::min(next, t_end);
        while (fi < forced.size() && forced[fi] <= cur) ++fi;
        if (fi < forced.size() && forced[fi] < next) next = forced[fi];
        if (next - cur > 1e-14 * next) edges.push_back(next);
        cur = next;
    }
    edges.back() = t_end;
    return edges;
}

Result fourier_integral(const std::function<double(double)>& amp, Trig trig, double tau,
                        const FourierOptions& o) {
    constexpr double pi = 3.14159265358979323846;
    constexpr std::size_t kMaxPrefix = 2000000;
    constexpr int kMaxDoublings = 400;

    const bool finite = std::isfinite(o.upper);
    const double half = tau > 0.0 ? pi / tau : std::numeric_limits<double>::infinity();
    const double offset = trig == Trig::Cos ? 0.5 : 0.0;
    auto f = [&](double w) {
        const double c = trig == Trig::Cos ? std::cos(w * tau) : std::sin(w * tau);
        return amp(w) * c;
    };
    auto next_zero = [&](double w) {
        if (!std::isfinite(half)) return std::numeric_limits<double>::infinity();
        double k = std::floor(w / half - offset) + 1.0;
        double z = (k + offset) * half;
        while (z <= w * (1.0 + 1e-14)) z += half;
        return z;
    };

    const Tolerance panel{std::min(1e-11, 1e-3 * o.rel), 0.0, 1.0, 4000, {}};
    Result out;
    double total = 0.0;
    auto add = [&](double a, double b) {
        // cos/sin(w tau) carries rounding of about eps * w tau relative to amp;
        // no panel is asked to resolve below that.
        Tolerance t = panel;
        const double amp_scale = std::max(std::abs(amp(a)), std::abs(amp(b)));
        if (std::isfinite(amp_scale))
            t.abs = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + b * std::abs(tau)) * amp_scale * (b - a);
        const Result r = integrate_scalar(f, a, b, t);
        total += r.value;
        out.error += r.error;
        out.evals += r.evals;
        return r.value;
    };

    double b0 = std::min(o.scale, next_zero(0.0));
    if (finite) b0 = std::min(b0, o.upper);
    {
        const double p = std::max(1.0, o.singular_power);
        auto g = [&](double u) { return f(b0 * std::pow(u, p)) * b0 * p * std::pow(u, p - 1.0); };
        const Result r = integrate_scalar(g, 0.0, 1.0, panel);
        total += r.value;
        out.error += r.error;
        out.evals += r.evals;
    }

    double cur = b0;
    bool at_zero = b0 == next_zero(0.0);
    double prev_term = 0.0;
    int doublings = 0;
    std::size_t panels = 0;
    while (true) {
        if (finite && cur >= o.upper) {
            out.value = total;
            return out;
        }
        if (!finite && at_zero && cur >= o.tail_start) break;
        const double z = next_zero(cur);
        double next = std::min(2.0 * cur, z);
        if (finite) next = std::min(next, o.upper);
        at_zero = next == z;
        if (next == 2.0 * cur && ++doublings > kMaxDoublings)
            throw NonConvergenceError("fourier_integral: integral does not settle (divergent?)");
        const double term = add(cur, next);
        if (++panels > kMaxPrefix) throw NonConvergenceError("fourier_integral: too many panels");
        if (!finite && !at_zero && cur >= o.tail_start && prev_term != 0.0) {
            // Same-sign doubling panels: geometric remainder estimate.
            const double r = std::abs(term / prev_term);
            const double target = std::max(o.abs, o.rel * std::abs(total));
            if (r < 0.9 && std::abs(term) * r / (1.0 - r) <= 0.1 * target) {
                out.value = total;
                return out;
            }
        }
        prev_term = term;
        cur = next;
    }

    std::vector<double> partial{total};
    double prev_est = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    for (std::size_t j = 0; j < o.max_segments; ++j) {
        const double term = add(cur, cur + half);
        cur += half;
        partial.push_back(total);
        const double target = std::max(o.abs, o.rel * std::abs(total));
        if (j >= 2 && std::abs(term) <= 1e-3 * target) {
            out.value = total;
            return out;
        }
        if (partial.size() >= 4) {
            const double est = euler_average(partial, 24);
            const double delta = std::abs(est - prev_est);
            if (delta <= 0.5 * std::max(o.abs, o.rel * std::abs(est))) {
                if (++stable >= 2) {
                    out.value = est;
                    out.error += delta;
                    return out;
                }
            } else {
                stable = 0;
            }
            prev_est = est;
        }
    }
    throw NonConvergenceError("fourier_integral: tail accelerator did not stabilise");
}

}  // namespace qbm::quad
