#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <thread>
#include <vector>

#include "txcap/capacity.hpp"
#include "txcap/csv.hpp"
#include "txcap/errors.hpp"
#include "txcap/stable.hpp"

namespace txcap {

// Counter-based generator: a splitmix64 stream. Cheap to construct, so every
// trial gets its own stream and parallel runs reproduce serial ones bit for
// bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe under log().
    double next_unit_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t fmix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
}

}  // namespace detail

// The stream for one (seed, trial) pair.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
    return SplitMix64(detail::fmix64(seed ^ detail::fmix64(trial * 0xD2B74407B1CE6E93ull +
                                                           0x632BE59BD9B4E019ull)));
}

// Poisson draw: product method for small means, rounded Gaussian beyond,
// where the direct product would need hundreds of uniforms per draw.
inline std::uint64_t poisson_sample(double mean, SplitMix64& rng) {
    if (!(mean >= 0.0))
        throw std::domain_error("poisson_sample: mean must be >= 0");
    if (mean == 0.0)
        return 0;
    if (mean <= 64.0) {
        std::uint64_t k = 0;
        double p = std::exp(mean);
        do {
            ++k;
            p *= rng.next_unit();
        } while (p > 1.0);
        return k - 1;
    }
    const double u1 = rng.next_unit_pos();
    const double u2 = rng.next_unit();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    const double k = std::round(mean + std::sqrt(mean) * z);
    return k <= 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

// Controls for one simulation: interferers are dropped on a disk of radius
// window_radius around the receiver; everything farther out is truncated
// away (see truncation_bias_bound).
struct SimConfig {
    double window_radius = 0.0;  // m
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double alpha = 4.0;
    std::vector<InterferenceComponent> tiers;
};

// Exact mean of the truncated far-field contribution:
// 2*pi*sum(lambda_k rho_k)*R^(2-alpha)/(alpha-2).
inline double truncation_bias_bound(const SimConfig& cfg) {
    double s = 0.0;
    for (const auto& t : cfg.tiers)
        s += t.density * t.power;
    return 2.0 * pi * s * std::pow(cfg.window_radius, 2.0 - cfg.alpha) / (cfg.alpha - 2.0);
}

// Smallest window radius keeping the truncated far-field mean below
// bias_fraction * margin.
inline double required_window_radius(const std::vector<InterferenceComponent>& components,
                                     double alpha, double margin, double bias_fraction) {
    if (!(alpha > 2.0))
        throw std::domain_error("required_window_radius: alpha must exceed 2");
    if (!(bias_fraction > 0.0) || !(margin > 0.0))
        throw std::domain_error("required_window_radius: margin and bias fraction must be > 0");
    double s = 0.0;
    for (const auto& c : components)
        s += c.density * c.power;
    if (s == 0.0)
        return 0.0;
    return std::pow(2.0 * pi * s / ((alpha - 2.0) * bias_fraction * margin), 1.0 / (alpha - 2.0));
}

// Empirical law of the aggregate interference: one value per trial, sorted.
struct EmpiricalDistribution {
    std::vector<double> values;  // W, ascending
    std::uint64_t trials = 0;

    // Fraction of samples <= x.
    double edf(double x) const {
        auto it = std::upper_bound(values.begin(), values.end(), x);
        return static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
    }

    // Order-statistic quantile.
    double quantile(double p) const {
        const auto n = values.size();
        auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        if (idx > 0) --idx;
        if (idx >= n) idx = n - 1;
        return values[idx];
    }
};

namespace detail {

inline void validate_sim_config(const SimConfig& cfg) {
    if (!(cfg.window_radius > 0.0))
        throw config_error("simulation window radius must be > 0");
    if (cfg.trials < 1)
        throw config_error("at least one trial required");
    if (!(cfg.alpha > 2.0))
        throw config_error("path-loss exponent must exceed 2");
    double expected_points = 0.0;
    for (const auto& t : cfg.tiers) {
        if (!(t.density >= 0.0) || !(t.power > 0.0))
            throw config_error("tier density must be >= 0 and power > 0");
        expected_points += t.density * pi * cfg.window_radius * cfg.window_radius;
    }
    if (!(expected_points <= 5e7))
        throw config_error("expected point count per trial exceeds 5e7; shrink the window or density");
}

inline double run_one_trial(const SimConfig& cfg, std::uint64_t trial) {
    SplitMix64 rng = trial_stream(cfg.seed, trial);
    const double r2 = cfg.window_radius * cfg.window_radius;
    const bool quartic = cfg.alpha == 4.0;
    const double ralpha = quartic ? 0.0 : std::pow(cfg.window_radius, -cfg.alpha);
    double total = 0.0;
    for (const auto& tier : cfg.tiers) {
        const std::uint64_t n = poisson_sample(tier.density * pi * r2, rng);
        for (std::uint64_t i = 0; i < n; ++i) {
            // Area-uniform position on the disk: squared distance = R^2 * u.
            const double u = rng.next_unit();
            if (quartic) {
                const double d2 = r2 * u;
                total += tier.power / (d2 * d2);
            } else {
                total += tier.power * ralpha * std::pow(u, -0.5 * cfg.alpha);
            }
        }
    }
    return total;
}

}  // namespace detail

// Draws cfg.trials independent interference snapshots. Trials use
// per-(seed, index) streams and are reduced in index order before sorting,
// so output is identical for any thread count.
inline EmpiricalDistribution sample_interference(const SimConfig& cfg,
                                                 unsigned max_threads = 0) {
    detail::validate_sim_config(cfg);

    std::vector<double> values(cfg.trials);
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned workers = max_threads == 0 ? hw : std::min(max_threads, hw);
    if (cfg.trials < 1024) workers = 1;

    if (workers == 1) {
        for (std::uint64_t t = 0; t < cfg.trials; ++t)
            values[t] = detail::run_one_trial(cfg, t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (cfg.trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, cfg.trials);
            if (begin >= end) break;
            pool.emplace_back([&cfg, &values, begin, end] {
                for (std::uint64_t t = begin; t < end; ++t)
                    values[t] = detail::run_one_trial(cfg, t);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::sort(values.begin(), values.end());
    return {std::move(values), cfg.trials};
}

struct OutageEstimate {
    double outage = 0.0;
    double ci_half_width = 0.0;  // Wilson 95%
    bool infeasible = false;     // nonpositive margin: outage is trivially 1
};

// Wilson-score half-width at 95% for k successes in n trials; stays valid
// down to the small outage probabilities this library lives at.
inline double wilson_half_width(std::uint64_t k, std::uint64_t n) {
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2n = z * z / nn;
    return z * std::sqrt(phat * (1.0 - phat) / nn + z2n / (4.0 * nn)) / (1.0 + z2n);
}

inline OutageEstimate empirical_outage(const EmpiricalDistribution& emp, double threshold) {
    if (emp.values.empty())
        throw std::invalid_argument("empirical_outage: empty sample");
    if (!(threshold > 0.0))
        return {1.0, 0.0, true};
    const auto it = std::lower_bound(emp.values.begin(), emp.values.end(), threshold);
    const auto k = static_cast<std::uint64_t>(emp.values.end() - it);
    return {static_cast<double>(k) / static_cast<double>(emp.values.size()),
            wilson_half_width(k, emp.values.size()), false};
}

inline OutageEstimate empirical_outage(const EmpiricalDistribution& emp, const SinrMargin& margin) {
    return empirical_outage(emp, margin.watts());
}

inline OutageEstimate empirical_outage(const SimConfig& cfg, const SinrMargin& margin,
                                       unsigned max_threads = 0) {
    return empirical_outage(sample_interference(cfg, max_threads), margin.watts());
}

// Two-sided Kolmogorov-Smirnov distance between the sample and an analytic
// CDF, evaluated at the sample points with both step conventions.
template <typename Cdf>
double ks_distance(const EmpiricalDistribution& emp, Cdf&& analytic_cdf) {
    if (emp.values.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    const double n = static_cast<double>(emp.values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < emp.values.size(); ++i) {
        const double f = analytic_cdf(emp.values[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// One decimal value per line; shortest representation that parses back to
// the same double.
inline void write_samples_csv(std::ostream& out, const EmpiricalDistribution& emp) {
    for (double v : emp.values)
        out << fmt_double(v) << '\n';
}

// Little-endian IEEE-754 doubles, one per trial, no header.
inline void write_samples_binary(std::ostream& out, const EmpiricalDistribution& emp) {
    for (double v : emp.values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        if constexpr (std::endian::native == std::endian::big) {
            std::uint64_t sw = 0;
            for (int b = 0; b < 8; ++b)
                sw |= ((bits >> (56 - 8 * b)) & 0xFFull) << (8 * b);
            bits = sw;
        }
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.write(buf, 8);
    }
}

}  // namespace txcap
