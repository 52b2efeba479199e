#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "txcap/errors.hpp"
#include "txcap/numerics.hpp"
#include "txcap/stable.hpp"

namespace txcap {

// Physical parameters of one network tier. Every transmitter in the tier
// uses the same power, link distance, SINR threshold and rate.
struct TierParams {
    double power = 0.0;           // W
    double range = 0.0;           // m
    double sinr_threshold = 0.0;  // linear
    double rate = 0.0;            // bit/s (bandwidth-normalized)

    bool operator==(const TierParams&) const = default;
};

// Shared-medium parameters: g(d) = gain_constant / d^alpha, plus the ambient
// noise power at every receiver.
struct ChannelParams {
    double alpha = 4.0;          // path-loss exponent, > 2
    double gain_constant = 1.0;  // unitless
    double noise = 0.0;          // W

    bool operator==(const ChannelParams&) const = default;
};

inline void validate(const TierParams& t) {
    if (!(t.power > 0.0 && t.range > 0.0 && t.sinr_threshold > 0.0 && t.rate > 0.0))
        throw std::domain_error("TierParams: all fields must be positive");
}

inline void validate(const ChannelParams& c) {
    if (!(c.alpha > 2.0))
        throw std::domain_error("ChannelParams: path-loss exponent must exceed 2");
    if (!(c.gain_constant > 0.0))
        throw std::domain_error("ChannelParams: gain constant must be positive");
    if (!(c.noise >= 0.0))
        throw std::domain_error("ChannelParams: noise power must be >= 0");
}

// The aggregate-interference level at which a link sits exactly at its SINR
// threshold: T = A rho r^-alpha / beta - eta. A link with T <= 0 fails even
// in silence.
class SinrMargin {
public:
    explicit SinrMargin(double watts) : watts_(watts) {
        if (!(watts > 0.0))
            throw infeasible_link_error("link cannot meet its SINR threshold at zero interference");
    }

    double watts() const noexcept { return watts_; }

private:
    double watts_;
};

inline SinrMargin sinr_margin(const TierParams& tier, const ChannelParams& ch) {
    validate(tier);
    validate(ch);
    const double received = ch.gain_constant * tier.power * std::pow(tier.range, -ch.alpha);
    return SinrMargin(received / tier.sinr_threshold - ch.noise);
}

// Whether densities come from the small-outage Taylor closed forms or from
// solving the Q-function condition exactly.
enum class DensityModel { asymptotic, exact };

// Interference always enters through the effective power A * rho.
inline double effective_power(const TierParams& tier, const ChannelParams& ch) {
    return ch.gain_constant * tier.power;
}

// The interference law a field of `density` transmitters of this tier
// presents at a typical receiver.
inline StableLaw tier_law(const TierParams& tier, const ChannelParams& ch, double density) {
    return StableLaw(ch.alpha, {{density, effective_power(tier, ch)}});
}

inline StableLaw overlaid_law(const TierParams& pr, const TierParams& sr, const ChannelParams& ch,
                              double lambda0, double lambda1) {
    return StableLaw(ch.alpha, {{lambda0, effective_power(pr, ch)},
                                {lambda1, effective_power(sr, ch)}});
}

namespace detail {

inline void require_alpha4(const ChannelParams& ch) {
    if (ch.alpha != 4.0)
        throw unsupported_exponent_error(
            "capacity closed forms available only for path-loss exponent 4");
}

}  // namespace detail

// Largest single-tier density meeting outage target eps0, to first order in
// eps0: lambda = (eps0 / pi) sqrt(T / rho_eff). Accurate for small targets
// (a few percent); see max_density_single_exact for the unexpanded solution.
inline double max_density_single_asymptotic(const TierParams& tier, const ChannelParams& ch,
                                            Probability eps0) {
    detail::require_alpha4(ch);
    const double t = sinr_margin(tier, ch).watts();
    return eps0.value() / pi * std::sqrt(t / effective_power(tier, ch));
}

// Exact counterpart: solves Q(pi^(3/2) lambda sqrt(rho_eff) / sqrt(2T)) =
// (1 - eps0) / 2 for lambda.
inline double max_density_single_exact(const TierParams& tier, const ChannelParams& ch,
                                       Probability eps0) {
    detail::require_alpha4(ch);
    if (!(eps0.value() < 1.0))
        throw std::domain_error("max_density_single_exact: outage target must be < 1");
    const double t = sinr_margin(tier, ch).watts();
    if (eps0.value() == 0.0)
        return 0.0;
    const double z = q_inverse(Probability(0.5 * (1.0 - eps0.value())));
    return z * std::sqrt(2.0 * t) / (std::pow(pi, 1.5) * std::sqrt(effective_power(tier, ch)));
}

inline double pick_density(const TierParams& tier, const ChannelParams& ch, Probability eps0,
                           DensityModel model) {
    return model == DensityModel::exact ? max_density_single_exact(tier, ch, eps0)
                                        : max_density_single_asymptotic(tier, ch, eps0);
}

// Transmission capacity: rate * density * success probability.
inline double capacity_single(const TierParams& tier, double lambda, Probability eps0) {
    if (!(lambda >= 0.0))
        throw std::domain_error("capacity_single: density must be >= 0");
    return tier.rate * lambda * (1.0 - eps0.value());
}

// Largest secondary density that raises the primary tier's outage by at most
// delta_eps: lambda1 = (delta_eps / pi) sqrt(T0 / rho1_eff). Note the
// primary margin paired with the secondary power.
inline double max_sr_density_for_pr_increment(const TierParams& pr, const TierParams& sr,
                                              const ChannelParams& ch, Probability delta_eps) {
    detail::require_alpha4(ch);
    const double t0 = sinr_margin(pr, ch).watts();
    return delta_eps.value() / pi * std::sqrt(t0 / effective_power(sr, ch));
}

// Primary capacity in the overlay: R0 lambda0 (1 - eps0 - delta_eps).
inline double pr_capacity_overlaid(const TierParams& pr, double lambda0, Probability eps0,
                                   Probability delta_eps) {
    if (!(lambda0 >= 0.0))
        throw std::domain_error("pr_capacity_overlaid: density must be >= 0");
    const double success = 1.0 - eps0.value() - delta_eps.value();
    if (!(success > 0.0))
        throw budget_exhausted_error("pr_capacity_overlaid: outage budgets sum to >= 1");
    return pr.rate * lambda0 * success;
}

namespace detail {

// Small-outage affine form of a tail probability at margin T under the mixed
// interferer field: (pi / sqrt(T)) * sum(lambda_k sqrt(rho_k_eff)).
inline double affine_outage(double margin, double weighted_density_sum) {
    return pi * weighted_density_sum / std::sqrt(margin);
}

}  // namespace detail

// Taylor-order outage of the primary tier at explicit densities; inverse of
// max_sr_density_for_pr_increment in its lambda1 argument.
inline Probability pr_outage_overlaid(const TierParams& pr, const TierParams& sr,
                                      const ChannelParams& ch, double lambda0, double lambda1) {
    detail::require_alpha4(ch);
    const double t0 = sinr_margin(pr, ch).watts();
    const double w = lambda0 * std::sqrt(effective_power(pr, ch)) +
                     lambda1 * std::sqrt(effective_power(sr, ch));
    return Probability(detail::affine_outage(t0, w));
}

// Taylor-order outage of the secondary tier, which sees both fields:
// eps1 = (pi / sqrt(T1)) (lambda0 sqrt(rho0_eff) + lambda1 sqrt(rho1_eff)).
inline Probability sr_outage(const TierParams& pr, const TierParams& sr, const ChannelParams& ch,
                             double lambda0, double lambda1) {
    detail::require_alpha4(ch);
    const double t1 = sinr_margin(sr, ch).watts();
    const double w = lambda0 * std::sqrt(effective_power(pr, ch)) +
                     lambda1 * std::sqrt(effective_power(sr, ch));
    return Probability(detail::affine_outage(t1, w));
}

struct SrDensityResult {
    double density = 0.0;
    bool clamped = false;  // the primary field alone exceeds the outage budget
};

// Largest secondary density keeping the secondary tier's own outage at
// eps1: lambda1 = (eps1 / pi) sqrt(T1 / rho1_eff) - lambda0 sqrt(rho0/rho1).
// Negative solutions are clamped to zero and flagged.
inline SrDensityResult max_sr_density_for_sr_outage(const TierParams& pr, const TierParams& sr,
                                                    const ChannelParams& ch, double lambda0,
                                                    Probability eps1) {
    detail::require_alpha4(ch);
    const double t1 = sinr_margin(sr, ch).watts();
    const double raw = eps1.value() / pi * std::sqrt(t1 / effective_power(sr, ch)) -
                       lambda0 * std::sqrt(pr.power / sr.power);
    if (raw < 0.0)
        return {0.0, true};
    return {raw, false};
}

// The binding density under simultaneous primary-increment and secondary-
// outage budgets.
inline double admissible_sr_density(double lambda_from_pr_budget, double lambda_from_sr_budget) {
    if (!(lambda_from_pr_budget >= 0.0 && lambda_from_sr_budget >= 0.0))
        throw std::domain_error("admissible_sr_density: densities must be >= 0");
    return std::min(lambda_from_pr_budget, lambda_from_sr_budget);
}

// Secondary capacity: R1 lambda1 (1 - eps1).
inline double sr_capacity(const TierParams& sr, double lambda1, Probability eps1) {
    if (!(lambda1 >= 0.0))
        throw std::domain_error("sr_capacity: density must be >= 0");
    if (!(eps1.value() < 1.0))
        throw budget_exhausted_error("sr_capacity: outage budget is >= 1");
    return sr.rate * lambda1 * (1.0 - eps1.value());
}

// One scenario's densities, outages, capacities and the overlay gain.
// delta_eps and eps1 are the outage levels the chosen densities actually
// induce (equal to the targets whenever the corresponding budget binds).
struct CapacityReport {
    double lambda0 = 0.0;         // TX/m^2
    double lambda1 = 0.0;         // TX/m^2
    Probability eps0;             // primary single-network outage target
    Probability delta_eps;        // induced primary outage increment
    Probability eps1;             // induced secondary outage
    double c0 = 0.0;              // bit/s/m^2
    double c1 = 0.0;              // bit/s/m^2
    double c_sum = 0.0;           // c0 + c1, exactly
    double kg_exact = 0.0;        // (c0 + c1) / single-network primary capacity
    double kg_approx = 0.0;       // 1 + c1 / c0
    bool sr_link_feasible = true;    // T1 > 0
    bool sr_density_clamped = false; // secondary budget exhausted by primary field alone
    bool outside_taylor_regime = false;  // eps0 + delta_eps beyond the small-outage regime
};

// Full overlay pipeline: primary density from its outage target, secondary
// density from the increment budget (and the secondary's own target when
// given), induced outages, per-tier capacities, and both gain figures.
inline CapacityReport overlaid_report(const TierParams& pr, const TierParams& sr,
                                      const ChannelParams& ch, Probability eps0,
                                      Probability delta_eps,
                                      std::optional<Probability> eps1_target = std::nullopt,
                                      DensityModel model = DensityModel::asymptotic) {
    detail::require_alpha4(ch);
    if (!(eps0.value() + delta_eps.value() < 1.0))
        throw budget_exhausted_error("overlaid_report: outage budgets sum to >= 1");

    CapacityReport rep;
    rep.eps0 = eps0;
    rep.lambda0 = pick_density(pr, ch, eps0, model);

    const double from_pr_budget = max_sr_density_for_pr_increment(pr, sr, ch, delta_eps);
    if (eps1_target) {
        const auto from_sr_budget =
            max_sr_density_for_sr_outage(pr, sr, ch, rep.lambda0, *eps1_target);
        rep.lambda1 = admissible_sr_density(from_pr_budget, from_sr_budget.density);
        rep.sr_density_clamped = from_sr_budget.clamped;
    } else {
        rep.lambda1 = from_pr_budget;
    }

    // Outage levels the chosen densities actually induce. With the increment
    // budget binding, delta_eps comes back out exactly.
    const double t0 = sinr_margin(pr, ch).watts();
    rep.delta_eps = Probability(detail::affine_outage(
        t0, rep.lambda1 * std::sqrt(effective_power(sr, ch))));
    rep.eps1 = sr_outage(pr, sr, ch, rep.lambda0, rep.lambda1);

    rep.c0 = pr_capacity_overlaid(pr, rep.lambda0, eps0, rep.delta_eps);
    rep.c1 = sr_capacity(sr, rep.lambda1, rep.eps1);
    rep.c_sum = rep.c0 + rep.c1;

    const double c0_single = capacity_single(pr, rep.lambda0, eps0);
    rep.kg_exact = rep.c_sum / c0_single;
    rep.kg_approx = 1.0 + rep.c1 / rep.c0;
    rep.outside_taylor_regime = eps0.value() + rep.delta_eps.value() > 0.1;
    return rep;
}

// First tradeoff setup: sweep the primary outage increment, everything else
// fixed. One report per grid value.
inline std::vector<CapacityReport> tradeoff_sweep_delta_eps(const TierParams& pr,
                                                            const TierParams& sr,
                                                            const ChannelParams& ch,
                                                            Probability eps0,
                                                            const std::vector<double>& grid) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("tradeoff_sweep_delta_eps: grid must be strictly increasing");
    std::vector<CapacityReport> out;
    out.reserve(grid.size());
    for (double de : grid)
        out.push_back(overlaid_report(pr, sr, ch, eps0, Probability(de)));
    return out;
}

// Second tradeoff setup: sweep the secondary power at a fixed secondary
// density. Grid points where the secondary link is infeasible (T1 <= 0) or
// its induced outage saturates are reported with eps1 = 1, c1 = 0 and the
// feasibility flags cleared.
inline std::vector<CapacityReport> tradeoff_sweep_sr_power(const TierParams& pr,
                                                           const TierParams& sr_base,
                                                           const ChannelParams& ch,
                                                           Probability eps0, double lambda1_fixed,
                                                           const std::vector<double>& rho1_grid) {
    detail::require_alpha4(ch);
    if (!(lambda1_fixed >= 0.0))
        throw std::domain_error("tradeoff_sweep_sr_power: density must be >= 0");
    for (std::size_t i = 0; i + 1 < rho1_grid.size(); ++i)
        if (!(rho1_grid[i] < rho1_grid[i + 1]))
            throw std::invalid_argument("tradeoff_sweep_sr_power: grid must be strictly increasing");

    const double t0 = sinr_margin(pr, ch).watts();
    const double lambda0 = max_density_single_asymptotic(pr, ch, eps0);

    std::vector<CapacityReport> out;
    out.reserve(rho1_grid.size());
    for (double rho1 : rho1_grid) {
        if (!(rho1 > 0.0))
            throw std::domain_error("tradeoff_sweep_sr_power: power grid must be positive");
        TierParams sr = sr_base;
        sr.power = rho1;

        CapacityReport rep;
        rep.eps0 = eps0;
        rep.lambda0 = lambda0;
        rep.lambda1 = lambda1_fixed;
        rep.delta_eps = Probability(detail::affine_outage(
            t0, lambda1_fixed * std::sqrt(effective_power(sr, ch))));
        rep.c0 = pr_capacity_overlaid(pr, lambda0, eps0, rep.delta_eps);

        bool feasible = true;
        double eps1 = 1.0;
        try {
            const double raw = detail::affine_outage(
                sinr_margin(sr, ch).watts(),
                lambda0 * std::sqrt(effective_power(pr, ch)) +
                    lambda1_fixed * std::sqrt(effective_power(sr, ch)));
            if (raw < 1.0)
                eps1 = raw;
            else
                feasible = false;  // induced outage saturates
        } catch (const infeasible_link_error&) {
            feasible = false;
        }

        rep.sr_link_feasible = feasible;
        rep.eps1 = Probability(eps1);
        rep.c1 = feasible ? sr_capacity(sr, lambda1_fixed, rep.eps1) : 0.0;
        rep.c_sum = rep.c0 + rep.c1;
        const double c0_single = capacity_single(pr, lambda0, eps0);
        rep.kg_exact = rep.c_sum / c0_single;
        rep.kg_approx = 1.0 + rep.c1 / rep.c0;
        rep.outside_taylor_regime = eps0.value() + rep.delta_eps.value() > 0.1;
        out.push_back(rep);
    }
    return out;
}

struct ConvexityInfo {
    bool convex = false;
    double monotone_region_end = 0.0;  // delta_eps range over which c1 still grows
};

// Shape of the secondary capacity as a function of the increment budget:
// c1(delta_eps) is a downward parabola; it has an interior rising branch iff
// sqrt(T1/T0) > eps0, and rises for delta_eps < (sqrt(T1/T0) - eps0) / 2.
inline ConvexityInfo convexity_check_c1(const TierParams& pr, const TierParams& sr,
                                        const ChannelParams& ch, Probability eps0) {
    detail::require_alpha4(ch);
    const double t0 = sinr_margin(pr, ch).watts();
    const double t1 = sinr_margin(sr, ch).watts();
    const double ratio = std::sqrt(t1 / t0);
    return {ratio > eps0.value(), 0.5 * (ratio - eps0.value())};
}

}  // namespace txcap
