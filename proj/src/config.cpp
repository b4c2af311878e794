#include "qbm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qbm/errors.hpp"

namespace qbm {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "kind",   "m",      "omega0", "omega_c",      "gamma",      "hbar",         "s",          "cutoff",
        "lambda", "regime", "omega_th", "dx",         "dy",         "t_min",        "t_max",      "points",
        "grid",   "include_zero", "omega_min", "omega_max", "omega_points", "omega_grid", "method", "rel",
        "out",    "sweep_cap"};
    return keys;
}

// Keys that describe the run rather than a physical point; never swept.
bool scalar_only(const std::string& k) { return k == "out" || k == "sweep_cap"; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError("config: " + key + " expects a finite number, got '" + text + "'");
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    unsigned long long v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("config: " + key + " expects a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("config: " + key + " expects true or false");
}

bool parse_spacing(const std::string& key, const std::string& text) {
    if (text == "log") return true;
    if (text == "linear") return false;
    throw ConfigError("config: " + key + " expects log or linear");
}

// Checks one value of a key in isolation, so type errors surface at parse time.
void check_value(const std::string& key, const std::string& v) {
    if (key == "kind") {
        if (v != "curve" && v != "spectra") throw ConfigError("config: kind expects curve or spectra");
    } else if (key == "cutoff") {
        try {
            cutoff_from_string(v);
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    } else if (key == "regime") {
        try {
            regime_from_string(v);
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    } else if (key == "method") {
        if (v != "quadrature" && v != "closed") throw ConfigError("config: method expects quadrature or closed");
    } else if (key == "grid" || key == "omega_grid") {
        parse_spacing(key, v);
    } else if (key == "include_zero") {
        parse_bool(key, v);
    } else if (key == "points" || key == "omega_points" || key == "sweep_cap") {
        parse_count(key, v);
    } else if (key != "out") {
        parse_real(key, v);
    }
}

}  // namespace

std::vector<double> TimeGrid::build(const SpectralDensity& sd) const {
    std::vector<double> g;
    if (use_default) {
        g = default_grid(sd, points);
    } else if (logarithmic) {
        g = log_grid(t_min, t_max, points);
    } else {
        g.resize(points);
        for (std::size_t i = 0; i < points; ++i)
            g[i] = t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    if (include_zero && (g.empty() || g.front() > 0.0)) g.insert(g.begin(), 0.0);
    return g;
}

std::vector<double> FrequencyGrid::build(double lambda) const {
    const double lo = omega_min > 0.0 ? omega_min : 1e-3 * lambda;
    const double hi = omega_max > 0.0 ? omega_max : 5.0 * lambda;
    if (logarithmic) return log_grid(lo, hi, points);
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        check_value(key, value);
        auto& vals = cfg.values_[key];
        if (vals.empty()) cfg.order_.push_back(key);
        if (!vals.empty() && scalar_only(key))
            throw ConfigError("config line " + std::to_string(line_no) + ": '" + key + "' cannot be repeated");
        vals.push_back(value);
    }
    for (const auto& k : cfg.order_)
        if (cfg.values_[k].size() > 1) cfg.axes_.push_back(k);
    if (cfg.values_.count("out")) cfg.out = cfg.values_["out"][0];
    if (cfg.values_.count("sweep_cap")) cfg.sweep_cap = parse_count("sweep_cap", cfg.values_["sweep_cap"][0]);

    std::size_t total = 1;
    for (const auto& k : cfg.axes_) {
        const std::size_t n = cfg.values_[k].size();
        if (total > cfg.sweep_cap / n + 1) {
            total = cfg.sweep_cap + 1;
            break;
        }
        total *= n;
    }
    if (total > cfg.sweep_cap)
        throw ConfigError("config: sweep has more than " + std::to_string(cfg.sweep_cap) + " points");
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::size_t RunConfig::size() const {
    std::size_t total = 1;
    for (const auto& k : axes_) total *= values_.at(k).size();
    return total;
}

RunPoint RunConfig::point(std::size_t index) const {
    if (index >= size()) throw ConfigError("config: point index out of range");
    // Last axis varies fastest.
    std::map<std::string, std::string> chosen;
    std::vector<std::pair<std::string, std::string>> assignment(axes_.size());
    std::size_t rest = index;
    for (std::size_t a = axes_.size(); a-- > 0;) {
        const auto& vals = values_.at(axes_[a]);
        assignment[a] = {axes_[a], vals[rest % vals.size()]};
        chosen[axes_[a]] = vals[rest % vals.size()];
        rest /= vals.size();
    }
    auto get = [&](const std::string& k) -> const std::string* {
        if (auto it = chosen.find(k); it != chosen.end()) return &it->second;
        if (auto it = values_.find(k); it != values_.end()) return &it->second.front();
        return nullptr;
    };
    auto real = [&](const std::string& k, double& dst) {
        if (const auto* v = get(k)) dst = parse_real(k, *v);
    };

    RunPoint p;
    p.assignment = std::move(assignment);
    if (const auto* v = get("kind")) p.kind = *v == "spectra" ? RunKind::Spectra : RunKind::Curve;
    real("m", p.sys.m);
    real("omega0", p.sys.omega0);
    real("omega_c", p.sys.omega_c);
    real("hbar", p.sys.hbar);
    real("gamma", p.sd.gamma);
    p.sys.gamma = p.sd.gamma;
    real("s", p.sd.s);
    if (const auto* v = get("cutoff")) p.sd.cutoff = cutoff_from_string(*v);
    real("lambda", p.sd.lambda);
    if (const auto* v = get("regime")) p.regime.kind = regime_from_string(*v);
    real("omega_th", p.regime.omega_th);
    p.sys.omega_th = p.regime.omega_th;
    real("dx", p.sep.dx);
    real("dy", p.sep.dy);

    if (const auto* v = get("points")) p.grid.points = parse_count("points", *v);
    if (const auto* v = get("grid")) p.grid.logarithmic = parse_spacing("grid", *v);
    // Without t_min the grid starts at 0 (linear) or 1e-3/Lambda (log).
    const bool has_min = get("t_min") != nullptr, has_max = get("t_max") != nullptr;
    if (has_min && !has_max) throw ConfigError("config: t_min given without t_max");
    if (has_max) {
        p.grid.use_default = false;
        p.grid.t_min = p.grid.logarithmic ? 1e-3 / p.sd.lambda : 0.0;
        real("t_min", p.grid.t_min);
        real("t_max", p.grid.t_max);
    }
    if (const auto* v = get("include_zero")) p.grid.include_zero = parse_bool("include_zero", *v);
    real("omega_min", p.omega_grid.omega_min);
    real("omega_max", p.omega_grid.omega_max);
    if (const auto* v = get("omega_points")) p.omega_grid.points = parse_count("omega_points", *v);
    if (const auto* v = get("omega_grid")) p.omega_grid.logarithmic = parse_spacing("omega_grid", *v);
    if (const auto* v = get("method")) p.method = *v == "closed" ? CurveMethod::ClosedFormWhereValid : CurveMethod::Quadrature;
    real("rel", p.rel);

    try {
        p.sys.validate();
        p.sd.validate();
        p.regime.validate();
        if (!(p.rel > 0.0 && p.rel < 1e-2)) throw DomainError("rel must be in (0, 1e-2)");
        if (p.grid.points < 2) throw DomainError("points must be at least 2");
        if (p.grid.points > 1000000) throw DomainError("points must be at most 1e6");
        if (!p.grid.use_default) {
            const double lo = p.grid.logarithmic ? 0.0 : -1.0;
            if (!(p.grid.t_min > lo && p.grid.t_max > p.grid.t_min))
                throw DomainError(p.grid.logarithmic ? "log grid needs 0 < t_min < t_max"
                                                     : "linear grid needs 0 <= t_min < t_max");
            if (p.grid.t_min < 0.0) throw DomainError("t_min must be >= 0");
        }
        if (p.omega_grid.points < 2 || p.omega_grid.points > 1000000)
            throw DomainError("omega_points must be in [2, 1e6]");
        const double wlo = p.omega_grid.omega_min > 0.0 ? p.omega_grid.omega_min : 1e-3 * p.sd.lambda;
        const double whi = p.omega_grid.omega_max > 0.0 ? p.omega_grid.omega_max : 5.0 * p.sd.lambda;
        if (p.omega_grid.omega_min < 0.0 || p.omega_grid.omega_max < 0.0 || !(whi > wlo))
            throw DomainError("need 0 < omega_min < omega_max");
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

}  // namespace qbm
