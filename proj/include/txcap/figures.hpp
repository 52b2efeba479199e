#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "txcap/capacity.hpp"
#include "txcap/csv.hpp"
#include "txcap/mc.hpp"
#include "txcap/scenario.hpp"
#include "txcap/stable.hpp"

namespace txcap {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// Window radius keeping the truncation-induced CDF error of the whole
// distribution (not just the outage tail) below kappa: the far-field mean
// shifts the empirical CDF by at most sup(pdf) * mean, and the pdf peaks at
// the mode.
inline double ks_window_radius(const StableLaw& law, double kappa) {
    if (law.dispersion() == 0.0)
        return 0.0;
    const double peak_density = levy_pdf(law, levy_mode(law));
    return std::sqrt(peak_density * pi * law.power_density() / kappa);
}

namespace detail {

inline std::string flag(bool b) { return b ? "1" : "0"; }

inline std::vector<double> figure_grid(const Scenario& sc, SweepVar var, double lo, double hi,
                                       std::size_t n) {
    if (sc.sweep_var == var && !sc.sweep_grid.empty())
        return sc.sweep_grid;
    return linspace(lo, hi, n);
}

}  // namespace detail

// Single-point overlay summary at the scenario's budgets.
inline CsvTable run_report(const Scenario& sc) {
    const auto eps1 = sc.eps1_target ? std::optional<Probability>(Probability(*sc.eps1_target))
                                     : std::nullopt;
    const CapacityReport rep = overlaid_report(sc.pr, sc.sr, sc.ch, Probability(sc.eps0),
                                               Probability(sc.delta_eps), eps1,
                                               sc.density_model);
    CsvTable t;
    t.comments = {"overlay capacity report",
                  "margins: t0_w=" + fmt_double(sinr_margin(sc.pr, sc.ch).watts()) +
                      " t1_w=" + fmt_double(sinr_margin(sc.sr, sc.ch).watts()),
                  "densities in TX/m^2, capacities in bit/s/m^2"};
    if (rep.outside_taylor_regime)
        t.comments.push_back("warning: outage budgets beyond the small-outage regime; "
                             "closed forms degrade");
    t.columns = {"lambda0", "lambda1", "eps0", "delta_eps", "eps1", "c0", "c1",
                 "c_sum", "kg_exact", "kg_approx", "sr_link_feasible", "sr_density_clamped"};
    t.add_row({fmt_double(rep.lambda0), fmt_double(rep.lambda1), fmt_double(rep.eps0.value()),
               fmt_double(rep.delta_eps.value()), fmt_double(rep.eps1.value()),
               fmt_double(rep.c0), fmt_double(rep.c1), fmt_double(rep.c_sum),
               fmt_double(rep.kg_exact), fmt_double(rep.kg_approx),
               detail::flag(rep.sr_link_feasible), detail::flag(rep.sr_density_clamped)});
    return t;
}

namespace detail {

inline CsvTable single_network_table(const Scenario& sc, const std::vector<double>& grid) {
    CsvTable t;
    t.columns = {"eps0", "lambda0_exact", "lambda0_asym", "c0_norm_exact", "c0_norm_asym"};
    for (double e : grid) {
        const Probability eps(e);
        const double lx = max_density_single_exact(sc.pr, sc.ch, eps);
        const double la = max_density_single_asymptotic(sc.pr, sc.ch, eps);
        t.add_row({fmt_double(e), fmt_double(lx), fmt_double(la),
                   fmt_double(lx * (1.0 - e)), fmt_double(la * (1.0 - e))});
    }
    return t;
}

inline CsvTable delta_eps_table(const Scenario& sc, const std::vector<double>& grid,
                                const std::vector<std::string>& want) {
    const auto reps = tradeoff_sweep_delta_eps(sc.pr, sc.sr, sc.ch, Probability(sc.eps0), grid);
    CsvTable t;
    t.columns = want;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = reps[i];
        std::vector<std::string> row;
        for (const auto& col : want) {
            if (col == "delta_eps") row.push_back(fmt_double(grid[i]));
            else if (col == "c0_norm") row.push_back(fmt_double(r.c0 / sc.pr.rate));
            else if (col == "c1_norm") row.push_back(fmt_double(r.c1 / sc.sr.rate));
            else if (col == "kg_approx") row.push_back(fmt_double(r.kg_approx));
            else if (col == "kg_exact") row.push_back(fmt_double(r.kg_exact));
            else if (col == "eps1") row.push_back(fmt_double(r.eps1.value()));
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace detail

// The predefined study curves. 1-2 sweep the primary outage target (1 with
// the exact solver, 2 with the small-outage closed form); 3-6 sweep the
// overlay increment budget with the closed forms.
inline CsvTable run_figure(int fig_id, const Scenario& sc) {
    const auto eps_grid = detail::figure_grid(sc, SweepVar::eps0, 0.001, 0.999, 201);
    const auto de_grid = detail::figure_grid(sc, SweepVar::delta_eps, 0.0, 0.1, 101);
    CsvTable t;
    switch (fig_id) {
        case 1:
            t = detail::single_network_table(sc, eps_grid);
            t.comments = {"figure 1: single-network density and capacity vs outage target",
                          "exact solver alongside the small-outage closed form",
                          "densities in TX/m^2, capacities rate-normalized (1/m^2)"};
            return t;
        case 2: {
            t.comments = {"figure 2: single-network capacity vs outage target (closed form)",
                          "warning: companion upper/lower capacity bound curves are out of "
                          "scope and not emitted",
                          "capacity rate-normalized (1/m^2)"};
            t.columns = {"eps0", "c0_norm_asym"};
            for (double e : eps_grid) {
                const double la = max_density_single_asymptotic(sc.pr, sc.ch, Probability(e));
                t.add_row({fmt_double(e), fmt_double(la * (1.0 - e))});
            }
            return t;
        }
        case 3:
            t = detail::delta_eps_table(sc, de_grid, {"delta_eps", "c0_norm"});
            t.comments = {"figure 3: primary capacity vs outage increment budget",
                          "capacity rate-normalized (1/m^2)"};
            return t;
        case 4:
            t = detail::delta_eps_table(sc, de_grid, {"delta_eps", "c1_norm"});
            t.comments = {"figure 4: secondary capacity vs outage increment budget",
                          "capacity rate-normalized (1/m^2)"};
            return t;
        case 5:
            t = detail::delta_eps_table(sc, de_grid, {"delta_eps", "kg_approx", "kg_exact"});
            t.comments = {"figure 5: overlay capacity gain vs outage increment budget",
                          "kg_approx = 1 + c1/c0; kg_exact = (c0+c1)/single-network c0"};
            return t;
        case 6:
            t = detail::delta_eps_table(sc, de_grid, {"delta_eps", "c1_norm", "c0_norm"});
            t.comments = {"figure 6: capacity tradeoff, increment budget as the parameter",
                          "capacities rate-normalized (1/m^2)"};
            return t;
        default:
            throw config_error("figure id must be 1..6");
    }
}

// The scenario's own sweep: single-network curve over eps0, overlay reports
// over delta_eps, or fixed-density overlay reports over the secondary power.
inline CsvTable run_sweep(const Scenario& sc) {
    if (sc.sweep_var == SweepVar::none || sc.sweep_grid.empty())
        throw config_error("sweep requires sweep_var and sweep_grid");

    CsvTable t;
    if (sc.sweep_var == SweepVar::eps0) {
        t = detail::single_network_table(sc, sc.sweep_grid);
        t.comments = {"sweep over eps0 (single network)"};
        return t;
    }
    if (sc.sweep_var == SweepVar::delta_eps) {
        const auto reps =
            tradeoff_sweep_delta_eps(sc.pr, sc.sr, sc.ch, Probability(sc.eps0), sc.sweep_grid);
        t.comments = {"sweep over delta_eps (overlay)",
                      "densities in TX/m^2, capacities in bit/s/m^2"};
        t.columns = {"delta_eps", "lambda0", "lambda1", "eps1", "c0", "c1", "c_sum",
                     "kg_exact", "kg_approx"};
        for (std::size_t i = 0; i < sc.sweep_grid.size(); ++i) {
            const auto& r = reps[i];
            t.add_row({fmt_double(sc.sweep_grid[i]), fmt_double(r.lambda0),
                       fmt_double(r.lambda1), fmt_double(r.eps1.value()), fmt_double(r.c0),
                       fmt_double(r.c1), fmt_double(r.c_sum), fmt_double(r.kg_exact),
                       fmt_double(r.kg_approx)});
        }
        return t;
    }
    // rho1 sweep at fixed secondary density
    if (!sc.lambda1)
        throw config_error("rho1 sweep requires a fixed lambda1");
    const auto reps = tradeoff_sweep_sr_power(sc.pr, sc.sr, sc.ch, Probability(sc.eps0),
                                              *sc.lambda1, sc.sweep_grid);
    t.comments = {"sweep over rho1 at fixed lambda1 (overlay)",
                  "densities in TX/m^2, capacities in bit/s/m^2",
                  "sr_feasible 0 marks grid points whose secondary link cannot operate"};
    t.columns = {"rho1", "delta_eps", "eps1", "c0", "c1", "c_sum", "sr_feasible"};
    for (std::size_t i = 0; i < sc.sweep_grid.size(); ++i) {
        const auto& r = reps[i];
        t.add_row({fmt_double(sc.sweep_grid[i]), fmt_double(r.delta_eps.value()),
                   fmt_double(r.eps1.value()), fmt_double(r.c0), fmt_double(r.c1),
                   fmt_double(r.c_sum), detail::flag(r.sr_link_feasible)});
    }
    return t;
}

struct ValidationResult {
    CsvTable table;
    bool all_pass = true;
};

namespace detail {

struct ValidationRowSink {
    CsvTable* table;
    bool* all_pass;

    void row(const std::string& name, double analytic, double empirical, double ci, bool pass) {
        table->add_row({name, fmt_double(analytic), fmt_double(empirical), fmt_double(ci),
                        pass ? "pass" : "fail"});
        if (!pass) *all_pass = false;
    }

    void skipped(const std::string& name, const std::string& why) {
        table->add_row({name, "", "", "", "skipped: " + why});
    }
};

// Simulation window: wide enough that the far field biases neither the
// outage tail (bias <= delta * margin) nor the full CDF (KS radius).
inline double validation_radius(const StableLaw& law, double margin, double bias_fraction) {
    const double r_outage =
        required_window_radius(law.components(), law.alpha(), margin, bias_fraction);
    return std::max({r_outage, ks_window_radius(law, bias_fraction), 1.0});
}

}  // namespace detail

// Monte Carlo cross-check of the closed forms at the scenario's operating
// point. Outage rows pass within their Wilson 95% half-width plus 0.002;
// KS rows pass at 0.01. Infeasible links yield skipped rows, not failures.
inline ValidationResult run_validation(const Scenario& sc, unsigned max_threads = 0) {
    if (sc.ch.alpha != 4.0)
        throw config_error("validation needs closed forms, so path-loss exponent must be 4");
    constexpr double outage_slack = 0.002;
    constexpr double ks_threshold = 0.01;

    ValidationResult res;
    res.table.columns = {"quantity", "analytic", "empirical", "ci_half_width", "status"};
    res.table.comments = {
        "validation: closed forms vs Monte Carlo, " + std::to_string(sc.sim.trials) + " trials",
        "outage rows pass within ci_half_width + " + fmt_double(outage_slack) +
            "; ks rows carry their threshold in the ci column"};
    detail::ValidationRowSink sink{&res.table, &res.all_pass};

    const double t0 = sinr_margin(sc.pr, sc.ch).watts();
    const double lambda0 = pick_density(sc.pr, sc.ch, Probability(sc.eps0), sc.density_model);

    // Single-tier stage: the primary field alone.
    const StableLaw law0 = tier_law(sc.pr, sc.ch, lambda0);
    SimConfig cfg0{sc.sim.window_radius.value_or(
                       detail::validation_radius(law0, t0, sc.sim.bias_fraction)),
                   sc.sim.trials, sc.sim.seed, sc.ch.alpha, law0.components()};
    const EmpiricalDistribution emp0 = sample_interference(cfg0, max_threads);
    res.table.comments.push_back("single_tier: radius_m=" + fmt_double(cfg0.window_radius) +
                                 " bias_bound_w=" + fmt_double(truncation_bias_bound(cfg0)) +
                                 " margin_w=" + fmt_double(t0));

    if (sc.sim.samples_out) {
        const std::string& path = *sc.sim.samples_out;
        const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
        std::ofstream dump(path, binary ? std::ios::binary : std::ios::out);
        if (!dump)
            throw config_error("cannot open samples_out path '" + path + "'");
        if (binary)
            write_samples_binary(dump, emp0);
        else
            write_samples_csv(dump, emp0);
    }

    const auto out0 = empirical_outage(emp0, t0);
    sink.row("pr_outage_single", sc.eps0, out0.outage, out0.ci_half_width,
             std::abs(out0.outage - sc.eps0) <= out0.ci_half_width + outage_slack);
    if (law0.dispersion() > 0.0) {
        const double d0 = ks_distance(
            emp0, [&law0](double x) { return x <= 0.0 ? 0.0 : levy_cdf(law0, x).value(); });
        sink.row("ks_levy_single", 0.0, d0, ks_threshold, d0 <= ks_threshold);
    } else {
        sink.skipped("ks_levy_single", "degenerate zero-interference law");
    }

    // Overlaid stage: both fields, both tiers' outage.
    try {
        const auto eps1 = sc.eps1_target
                              ? std::optional<Probability>(Probability(*sc.eps1_target))
                              : std::nullopt;
        const CapacityReport rep =
            overlaid_report(sc.pr, sc.sr, sc.ch, Probability(sc.eps0),
                            Probability(sc.delta_eps), eps1, sc.density_model);
        const double t1 = sinr_margin(sc.sr, sc.ch).watts();
        const StableLaw lawz = overlaid_law(sc.pr, sc.sr, sc.ch, rep.lambda0, rep.lambda1);
        SimConfig cfgz{sc.sim.window_radius.value_or(detail::validation_radius(
                           lawz, std::min(t0, t1), sc.sim.bias_fraction)),
                       sc.sim.trials, sc.sim.seed + 1, sc.ch.alpha, lawz.components()};
        const EmpiricalDistribution empz = sample_interference(cfgz, max_threads);
        res.table.comments.push_back(
            "overlaid: radius_m=" + fmt_double(cfgz.window_radius) +
            " bias_bound_w=" + fmt_double(truncation_bias_bound(cfgz)) +
            " margin_w=" + fmt_double(std::min(t0, t1)));

        const double pr_target = sc.eps0 + rep.delta_eps.value();
        const auto outp = empirical_outage(empz, t0);
        sink.row("pr_outage_overlaid", pr_target, outp.outage, outp.ci_half_width,
                 std::abs(outp.outage - pr_target) <= outp.ci_half_width + outage_slack);

        const auto outs = empirical_outage(empz, t1);
        sink.row("sr_outage_overlaid", rep.eps1.value(), outs.outage, outs.ci_half_width,
                 std::abs(outs.outage - rep.eps1.value()) <= outs.ci_half_width + outage_slack);

        if (lawz.dispersion() > 0.0) {
            const double dz = ks_distance(
                empz, [&lawz](double x) { return x <= 0.0 ? 0.0 : levy_cdf(lawz, x).value(); });
            sink.row("ks_levy_overlaid", 0.0, dz, ks_threshold, dz <= ks_threshold);
        } else {
            sink.skipped("ks_levy_overlaid", "degenerate zero-interference law");
        }
    } catch (const infeasible_link_error&) {
        sink.skipped("pr_outage_overlaid", "secondary link infeasible");
        sink.skipped("sr_outage_overlaid", "secondary link infeasible");
        sink.skipped("ks_levy_overlaid", "secondary link infeasible");
    }

    return res;
}

}  // namespace txcap
