#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "txcap/mc.hpp"
#include "txcap/figures.hpp"

using namespace txcap;
using Catch::Approx;

namespace {

const TierParams kPr{20.0, 20.0, 10.0, 1.0};
const ChannelParams kCh{4.0, 1.0, 1e-6};
constexpr double kT0 = 1.15e-5;

}  // namespace

TEST_CASE("poisson_sample statistics and determinism") {
    CHECK_THROWS_AS([] { SplitMix64 g(1); return poisson_sample(-1.0, g); }(),
                    std::domain_error);

    {
        SplitMix64 g(42);
        CHECK(poisson_sample(0.0, g) == 0);
    }

    // small-mean branch: ensemble mean within 3 sigma, variance near the mean
    for (double mean : {0.5, 4.0, 30.0}) {
        SplitMix64 g(123);
        const int n = 100000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(poisson_sample(mean, g));
            sum += k;
            sumsq += k * k;
        }
        const double avg = sum / n;
        const double var = sumsq / n - avg * avg;
        CHECK(std::abs(avg - mean) <= 3.0 * std::sqrt(mean / n));
        CHECK(var == Approx(mean).epsilon(0.05));
    }

    // gaussian branch
    {
        SplitMix64 g(7);
        const int n = 50000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += static_cast<double>(poisson_sample(400.0, g));
        CHECK(std::abs(sum / n - 400.0) <= 3.0 * std::sqrt(400.0 / n));
    }

    // identical streams replay identically
    SplitMix64 a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(poisson_sample(10.0, a) == poisson_sample(10.0, b));
}

TEST_CASE("trial streams are reproducible and distinct") {
    auto s1 = trial_stream(1234, 7);
    auto s2 = trial_stream(1234, 7);
    auto s3 = trial_stream(1234, 8);
    auto s4 = trial_stream(1235, 7);
    bool all_same_t = true, all_same_s = true;
    for (int i = 0; i < 32; ++i) {
        const auto v = s1.next();
        CHECK(v == s2.next());
        all_same_t = all_same_t && v == s3.next();
        all_same_s = all_same_s && v == s4.next();
    }
    CHECK_FALSE(all_same_t);
    CHECK_FALSE(all_same_s);
}

TEST_CASE("sample_interference basics") {
    const SimConfig cfg{500.0, 5000, 2024, 4.0, {{2.4137e-6, 20.0}}};
    const auto emp = sample_interference(cfg);
    REQUIRE(emp.values.size() == 5000);
    CHECK(emp.trials == 5000);
    CHECK(std::is_sorted(emp.values.begin(), emp.values.end()));

    // bit-identical across reruns and across thread counts
    const auto again = sample_interference(cfg);
    CHECK(emp.values == again.values);
    const auto serial = sample_interference(cfg, 1);
    const auto par = sample_interference(cfg, 4);
    CHECK(serial.values == par.values);

    // empty field
    const SimConfig empty{500.0, 100, 1, 4.0, {{0.0, 1.0}}};
    const auto zeros = sample_interference(empty);
    for (double v : zeros.values) CHECK(v == 0.0);
}

TEST_CASE("sample_interference rejects bad configs") {
    CHECK_THROWS_AS(sample_interference({0.0, 10, 1, 4.0, {{1e-6, 1.0}}}), config_error);
    CHECK_THROWS_AS(sample_interference({100.0, 0, 1, 4.0, {{1e-6, 1.0}}}), config_error);
    CHECK_THROWS_AS(sample_interference({100.0, 10, 1, 1.5, {{1e-6, 1.0}}}), config_error);
    // overflow-scale point count
    CHECK_THROWS_AS(sample_interference({1e6, 10, 1, 4.0, {{1.0, 1.0}}}), config_error);
}

TEST_CASE("required_window_radius") {
    const std::vector<InterferenceComponent> comps{{2.414e-6, 20.0}};
    const double r = required_window_radius(comps, 4.0, kT0, 1e-3);
    CHECK(r == Approx(std::sqrt(pi * 2.414e-6 * 20.0 / (1e-3 * kT0))).epsilon(1e-12));
    CHECK(r == Approx(114.84).margin(0.5));

    // doubling the power density scales the radius by sqrt(2) at alpha = 4
    const std::vector<InterferenceComponent> twice{{2.0 * 2.414e-6, 20.0}};
    CHECK(required_window_radius(twice, 4.0, kT0, 1e-3) == Approx(r * std::sqrt(2.0)).epsilon(1e-12));

    // huge tolerated bias needs only a vanishing window
    CHECK(required_window_radius(comps, 4.0, kT0, 1e9) < 1e-2);

    // general exponent: alpha = 3 makes the radius linear in 1/(bias*margin)
    CHECK(required_window_radius(comps, 3.0, kT0, 1e-3) ==
          Approx(2.0 * pi * 2.414e-6 * 20.0 / (1e-3 * kT0)).epsilon(1e-12));

    CHECK_THROWS_AS(required_window_radius(comps, 2.0, kT0, 1e-3), std::domain_error);
    CHECK_THROWS_AS(required_window_radius(comps, 4.0, kT0, 0.0), std::domain_error);
}

TEST_CASE("truncation bound is honored at the prescribed radius") {
    const std::vector<InterferenceComponent> comps{{2.414e-6, 20.0}, {3.414e-5, 0.1}};
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        const double r = required_window_radius(comps, 4.0, kT0, delta);
        const SimConfig cfg{r, 1, 0, 4.0, comps};
        CHECK(truncation_bias_bound(cfg) <= delta * kT0 * (1.0 + 1e-12));
    }
}

TEST_CASE("empirical_outage") {
    const SimConfig cfg{500.0, 20000, 5150, 4.0, {{2.4137e-6, 20.0}}};
    const auto emp = sample_interference(cfg);

    CHECK(empirical_outage(emp, 1e50).outage == 0.0);

    const auto inf = empirical_outage(emp, 0.0);
    CHECK(inf.infeasible);
    CHECK(inf.outage == 1.0);

    // frozen Wilson half-width spot check: k=100, n=10000
    CHECK(wilson_half_width(100, 10000) == Approx(1.9588e-3).margin(1e-5));
}

TEST_CASE("single-tier outage matches the tail target") {
    // window sized for outage fidelity at the margin
    const double lambda0 = max_density_single_asymptotic(kPr, kCh, Probability(0.01));
    const StableLaw law = tier_law(kPr, kCh, lambda0);
    const double r = required_window_radius(law.components(), 4.0, kT0, 1e-3);
    const SimConfig cfg{r, 20000, 31337, 4.0, law.components()};
    const auto est = empirical_outage(sample_interference(cfg), sinr_margin(kPr, kCh));
    CHECK_FALSE(est.infeasible);
    CHECK(std::abs(est.outage - 0.01) <= est.ci_half_width + 0.002);
}

TEST_CASE("ks_distance mechanics") {
    const StableLaw law(4.0, {{2.4137e-6, 20.0}});
    auto cdf = [&law](double x) { return levy_cdf(law, x).value(); };

    // stratified exact quantiles: empirical CDF straddles the analytic one
    const std::size_t n = 2000;
    EmpiricalDistribution strat;
    strat.trials = n;
    for (std::size_t i = 1; i <= n; ++i)
        strat.values.push_back(
            levy_quantile(law, Probability((static_cast<double>(i) - 0.5) / n)));
    CHECK(ks_distance(strat, cdf) <= 0.5 / n + 1e-9);

    // a CDF displaced by 0.1 must show at least that distance
    auto shifted = [&cdf](double x) { return std::max(cdf(x) - 0.1, 0.0); };
    CHECK(ks_distance(strat, shifted) >= 0.1);

    // null draws stay inside the 99% Kolmogorov band
    oracle::Rng rng(5);
    EmpiricalDistribution drawn;
    drawn.trials = 10000;
    for (int i = 0; i < 10000; ++i)
        drawn.values.push_back(levy_quantile(law, Probability(rng.uniform(1e-12, 1.0 - 1e-12))));
    std::sort(drawn.values.begin(), drawn.values.end());
    CHECK(ks_distance(drawn, cdf) <= 1.63 / std::sqrt(10000.0));
}

TEST_CASE("empirical CDF agrees with the closed form") {
    const double lambda0 = max_density_single_asymptotic(kPr, kCh, Probability(0.01));
    const StableLaw law = tier_law(kPr, kCh, lambda0);
    const SimConfig cfg{ks_window_radius(law, 1e-3), 30000, 777, 4.0, law.components()};
    const auto emp = sample_interference(cfg);
    const double d =
        ks_distance(emp, [&law](double x) { return x <= 0.0 ? 0.0 : levy_cdf(law, x).value(); });
    CHECK(d <= 0.015);
}

TEST_CASE("superposed field matches the merged-dispersion field in distribution") {
    const StableLaw two(4.0, {{2.4137e-6, 20.0}, {3.4135e-5, 0.1}});
    const StableLaw merged(4.0, {{two.dispersion(), 1.0}});
    const double r = ks_window_radius(two, 1e-3);

    const auto emp_two = sample_interference({r, 30000, 11, 4.0, two.components()});
    const auto emp_one = sample_interference({r, 30000, 12, 4.0, merged.components()});
    CHECK(oracle::two_sample_ks(emp_two.values, emp_one.values) <= 0.015);
}

TEST_CASE("quantiles agree with the analytic inverse CDF") {
    const double lambda0 = max_density_single_asymptotic(kPr, kCh, Probability(0.01));
    const StableLaw law = tier_law(kPr, kCh, lambda0);
    const SimConfig cfg{ks_window_radius(law, 1e-3), 1000000, 4242, 4.0, law.components()};
    const auto emp = sample_interference(cfg);
    for (double p : {0.1, 0.5, 0.9}) {
        const double analytic = levy_quantile(law, Probability(p));
        CHECK(emp.quantile(p) == Approx(analytic).epsilon(0.02));
    }
}

TEST_CASE("general-exponent sampler matches the transform closed form") {
    // alpha = 3: no closed-form CDF, but the transform is exact
    const StableLaw law(3.0, {{1e-6, 1.0}});
    const double target = 0.9;
    const double s =
        std::pow(-std::log(target) / (pi * 1e-6 * gamma_function(1.0 / 3.0)), 1.5);
    const double r = 16000.0;  // keeps mgf truncation bias below ~5e-4
    const SimConfig cfg{r, 100000, 2718, 3.0, law.components()};
    const auto emp = sample_interference(cfg);
    double acc = 0.0;
    for (double v : emp.values) acc += std::exp(-s * v);
    const double emp_mgf = acc / static_cast<double>(emp.values.size());
    CHECK(emp_mgf == Approx(mgf(law, s)).margin(3e-3));
    CHECK(mgf(law, s) == Approx(target).epsilon(1e-12));
}

TEST_CASE("sample export round trips") {
    EmpiricalDistribution emp;
    emp.trials = 4;
    emp.values = {1.5e-9, 2.25e-5, 3.0, 12345.678901234567};

    std::ostringstream text;
    write_samples_csv(text, emp);
    std::istringstream back(text.str());
    std::string linebuf;
    std::size_t i = 0;
    while (std::getline(back, linebuf)) {
        REQUIRE(i < emp.values.size());
        CHECK(std::stod(linebuf) == emp.values[i]);
        ++i;
    }
    CHECK(i == emp.values.size());

    std::ostringstream bin(std::ios::binary);
    write_samples_binary(bin, emp);
    const std::string bytes = bin.str();
    REQUIRE(bytes.size() == emp.values.size() * 8);
    // little-endian check against a known pattern: 3.0 = 0x4008000000000000
    const std::size_t off = 2 * 8;
    CHECK(static_cast<unsigned char>(bytes[off + 7]) == 0x40);
    CHECK(static_cast<unsigned char>(bytes[off + 6]) == 0x08);
    for (int b = 0; b < 6; ++b)
        CHECK(static_cast<unsigned char>(bytes[off + b]) == 0x00);
}
