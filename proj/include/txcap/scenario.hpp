#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "txcap/capacity.hpp"
#include "txcap/csv.hpp"
#include "txcap/errors.hpp"

namespace txcap {

enum class SweepVar { none, eps0, delta_eps, rho1 };

struct SimControls {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 12345;
    std::optional<double> window_radius;  // m; derived from the scenario when absent
    double bias_fraction = 1e-3;          // truncation budget as a fraction of the margin
    std::optional<std::string> samples_out;  // raw sample dump (.csv or .bin by extension)

    bool operator==(const SimControls&) const = default;
};

// A full run description. Defaults are the built-in reference parameter set:
// 20 W / 20 m primary links and 0.1 W / 5 m secondary links, both at 10 dB
// SINR targets over a 1e-6 W noise floor, path-loss exponent 4.
struct Scenario {
    TierParams pr{20.0, 20.0, 10.0, 1.0};
    TierParams sr{0.1, 5.0, 10.0, 1.0};
    ChannelParams ch{4.0, 1.0, 1e-6};
    double eps0 = 0.01;
    double delta_eps = 0.01;
    std::optional<double> eps1_target;
    std::optional<double> lambda1;  // fixed secondary density, required for rho1 sweeps
    DensityModel density_model = DensityModel::asymptotic;
    SweepVar sweep_var = SweepVar::none;
    std::vector<double> sweep_grid;
    SimControls sim;

    static Scenario defaults() { return {}; }

    bool operator==(const Scenario&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view text, int line) {
    text = trim(text);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw parse_error("expected a number, got '" + std::string(text) + "'", line);
    return v;
}

inline std::uint64_t parse_count(std::string_view text, int line) {
    text = trim(text);
    std::uint64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw parse_error("expected a non-negative integer, got '" + std::string(text) + "'",
                          line);
    return v;
}

// SINR thresholds may carry an explicit dB suffix; everything else is linear.
inline double parse_sinr(std::string_view text, int line) {
    text = trim(text);
    if (text.size() > 2) {
        auto suffix = text.substr(text.size() - 2);
        if (suffix == "dB" || suffix == "db" || suffix == "DB") {
            const double db = parse_number(text.substr(0, text.size() - 2), line);
            return std::pow(10.0, db / 10.0);
        }
    }
    return parse_number(text, line);
}

// Either an explicit comma list or lo:hi:n shorthand for n evenly spaced
// points.
inline std::vector<double> parse_grid(std::string_view text, int line) {
    text = trim(text);
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        std::string s(text);
        std::istringstream is(s);
        std::string lo, hi, n;
        std::getline(is, lo, ':');
        std::getline(is, hi, ':');
        std::getline(is, n);
        const double a = parse_number(lo, line);
        const double b = parse_number(hi, line);
        const auto count = parse_count(n, line);
        if (count < 2 || !(a < b))
            throw parse_error("grid shorthand must be lo:hi:n with lo < b and n >= 2", line);
        for (std::uint64_t i = 0; i < count; ++i)
            grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
        return grid;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        grid.push_back(parse_number(text.substr(pos, comma - pos), line));
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw parse_error("grid values must be strictly increasing", line);
    return grid;
}

inline void require(bool ok, const std::string& what, int line) {
    if (!ok) throw parse_error(what, line);
}

}  // namespace detail

// Parses a flat key = value document (decimal numbers, SI units, '#'
// comments). Omitted keys keep the built-in defaults. Unknown keys, repeated
// keys, malformed numbers and invariant violations all fail with the
// offending line number.
inline Scenario parse_scenario(std::string_view text) {
    using detail::parse_count;
    using detail::parse_grid;
    using detail::parse_number;
    using detail::parse_sinr;
    using detail::require;
    using detail::trim;

    Scenario sc;
    std::map<std::string, int> seen;  // key -> line, for duplicate reporting
    int grid_line = 0;
    int var_line = 0;

    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line;
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (eol == text.size() && raw.empty()) break;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        const std::size_t eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("expected 'key = value'", line);
        const std::string key{trim(raw.substr(0, eq))};
        const std::string_view val = trim(raw.substr(eq + 1));
        if (key.empty() || val.empty())
            throw parse_error("expected 'key = value'", line);
        if (auto [it, inserted] = seen.emplace(key, line); !inserted)
            throw parse_error("duplicate key '" + key + "' (first on line " +
                                  std::to_string(it->second) + ")",
                              line);

        if (key == "rho0") {
            sc.pr.power = parse_number(val, line);
            require(sc.pr.power > 0.0, "rho0 must be > 0", line);
        } else if (key == "rho1") {
            sc.sr.power = parse_number(val, line);
            require(sc.sr.power > 0.0, "rho1 must be > 0", line);
        } else if (key == "r0") {
            sc.pr.range = parse_number(val, line);
            require(sc.pr.range > 0.0, "r0 must be > 0", line);
        } else if (key == "r1") {
            sc.sr.range = parse_number(val, line);
            require(sc.sr.range > 0.0, "r1 must be > 0", line);
        } else if (key == "beta0") {
            sc.pr.sinr_threshold = parse_sinr(val, line);
            require(sc.pr.sinr_threshold > 0.0, "beta0 must be > 0", line);
        } else if (key == "beta1") {
            sc.sr.sinr_threshold = parse_sinr(val, line);
            require(sc.sr.sinr_threshold > 0.0, "beta1 must be > 0", line);
        } else if (key == "rate0") {
            sc.pr.rate = parse_number(val, line);
            require(sc.pr.rate > 0.0, "rate0 must be > 0", line);
        } else if (key == "rate1") {
            sc.sr.rate = parse_number(val, line);
            require(sc.sr.rate > 0.0, "rate1 must be > 0", line);
        } else if (key == "eta") {
            sc.ch.noise = parse_number(val, line);
            require(sc.ch.noise >= 0.0, "eta must be >= 0", line);
        } else if (key == "alpha") {
            sc.ch.alpha = parse_number(val, line);
            require(sc.ch.alpha > 2.0, "alpha must exceed 2", line);
        } else if (key == "gain_const") {
            sc.ch.gain_constant = parse_number(val, line);
            require(sc.ch.gain_constant > 0.0, "gain_const must be > 0", line);
        } else if (key == "eps0") {
            sc.eps0 = parse_number(val, line);
            require(sc.eps0 >= 0.0 && sc.eps0 < 1.0, "eps0 must lie in [0,1)", line);
        } else if (key == "delta_eps") {
            sc.delta_eps = parse_number(val, line);
            require(sc.delta_eps >= 0.0 && sc.delta_eps < 1.0, "delta_eps must lie in [0,1)",
                    line);
        } else if (key == "eps1_target") {
            sc.eps1_target = parse_number(val, line);
            require(*sc.eps1_target > 0.0 && *sc.eps1_target < 1.0,
                    "eps1_target must lie in (0,1)", line);
        } else if (key == "lambda1") {
            sc.lambda1 = parse_number(val, line);
            require(*sc.lambda1 >= 0.0, "lambda1 must be >= 0", line);
        } else if (key == "density_model") {
            if (val == "asymptotic")
                sc.density_model = DensityModel::asymptotic;
            else if (val == "exact")
                sc.density_model = DensityModel::exact;
            else
                throw parse_error("density_model must be 'asymptotic' or 'exact'", line);
        } else if (key == "sweep_var") {
            var_line = line;
            if (val == "eps0")
                sc.sweep_var = SweepVar::eps0;
            else if (val == "delta_eps")
                sc.sweep_var = SweepVar::delta_eps;
            else if (val == "rho1")
                sc.sweep_var = SweepVar::rho1;
            else
                throw parse_error("sweep_var must be one of eps0, delta_eps, rho1", line);
        } else if (key == "sweep_grid") {
            grid_line = line;
            sc.sweep_grid = parse_grid(val, line);
        } else if (key == "trials") {
            sc.sim.trials = parse_count(val, line);
            require(sc.sim.trials >= 1, "trials must be >= 1", line);
        } else if (key == "seed") {
            sc.sim.seed = parse_count(val, line);
        } else if (key == "window_radius") {
            sc.sim.window_radius = parse_number(val, line);
            require(*sc.sim.window_radius > 0.0, "window_radius must be > 0", line);
        } else if (key == "bias_fraction") {
            sc.sim.bias_fraction = parse_number(val, line);
            require(sc.sim.bias_fraction > 0.0, "bias_fraction must be > 0", line);
        } else if (key == "samples_out") {
            sc.sim.samples_out = std::string(val);
        } else {
            throw parse_error("unknown key '" + key + "'", line);
        }
    }

    if (sc.sweep_var != SweepVar::none && sc.sweep_grid.empty())
        throw parse_error("sweep_var given without sweep_grid", var_line);
    if (sc.sweep_var == SweepVar::none && !sc.sweep_grid.empty())
        throw parse_error("sweep_grid given without sweep_var", grid_line);
    if (!sc.sweep_grid.empty()) {
        const bool prob_grid = sc.sweep_var != SweepVar::rho1;
        for (double g : sc.sweep_grid) {
            if (prob_grid)
                require(g >= 0.0 && g < 1.0, "sweep grid values must lie in [0,1)", grid_line);
            else
                require(g > 0.0, "rho1 grid values must be > 0", grid_line);
        }
    }
    return sc;
}

inline const char* to_string(SweepVar v) {
    switch (v) {
        case SweepVar::eps0: return "eps0";
        case SweepVar::delta_eps: return "delta_eps";
        case SweepVar::rho1: return "rho1";
        default: return "none";
    }
}

// Serializes back to the config format; parse_scenario(emit_scenario(s)) == s.
inline std::string emit_scenario(const Scenario& sc) {
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& v) { out << key << " = " << v << '\n'; };
    kv("rho0", fmt_double(sc.pr.power));
    kv("rho1", fmt_double(sc.sr.power));
    kv("r0", fmt_double(sc.pr.range));
    kv("r1", fmt_double(sc.sr.range));
    kv("beta0", fmt_double(sc.pr.sinr_threshold));
    kv("beta1", fmt_double(sc.sr.sinr_threshold));
    kv("rate0", fmt_double(sc.pr.rate));
    kv("rate1", fmt_double(sc.sr.rate));
    kv("eta", fmt_double(sc.ch.noise));
    kv("alpha", fmt_double(sc.ch.alpha));
    kv("gain_const", fmt_double(sc.ch.gain_constant));
    kv("eps0", fmt_double(sc.eps0));
    kv("delta_eps", fmt_double(sc.delta_eps));
    if (sc.eps1_target) kv("eps1_target", fmt_double(*sc.eps1_target));
    if (sc.lambda1) kv("lambda1", fmt_double(*sc.lambda1));
    kv("density_model", sc.density_model == DensityModel::exact ? "exact" : "asymptotic");
    if (sc.sweep_var != SweepVar::none) {
        kv("sweep_var", to_string(sc.sweep_var));
        std::string grid;
        for (std::size_t i = 0; i < sc.sweep_grid.size(); ++i)
            grid += (i ? "," : "") + fmt_double(sc.sweep_grid[i]);
        kv("sweep_grid", grid);
    }
    kv("trials", std::to_string(sc.sim.trials));
    kv("seed", std::to_string(sc.sim.seed));
    if (sc.sim.window_radius) kv("window_radius", fmt_double(*sc.sim.window_radius));
    kv("bias_fraction", fmt_double(sc.sim.bias_fraction));
    if (sc.sim.samples_out) kv("samples_out", *sc.sim.samples_out);
    return out.str();
}

}  // namespace txcap
