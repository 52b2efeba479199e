#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "txcap/scenario.hpp"

using namespace txcap;
using Catch::Approx;

TEST_CASE("empty document yields the built-in defaults") {
    const Scenario sc = parse_scenario("");
    CHECK(sc == Scenario::defaults());
    CHECK(sc.pr.power == 20.0);
    CHECK(sc.sr.power == 0.1);
    CHECK(sc.pr.range == 20.0);
    CHECK(sc.sr.range == 5.0);
    CHECK(sc.pr.sinr_threshold == 10.0);
    CHECK(sc.ch.noise == 1e-6);
    CHECK(sc.ch.alpha == 4.0);
    CHECK(sc.sweep_var == SweepVar::none);
}

TEST_CASE("comments, blanks and whitespace are tolerated") {
    const Scenario sc = parse_scenario(
        "# reference setup\n"
        "\n"
        "  rho0 = 25   # override\n"
        "\teta=2e-6\r\n");
    CHECK(sc.pr.power == 25.0);
    CHECK(sc.ch.noise == 2e-6);
}

TEST_CASE("dB suffix on SINR thresholds") {
    CHECK(parse_scenario("beta0 = 10 dB").pr.sinr_threshold == Approx(10.0).epsilon(1e-15));
    CHECK(parse_scenario("beta1 = 13 dB").sr.sinr_threshold ==
          Approx(std::pow(10.0, 1.3)).epsilon(1e-15));
    CHECK(parse_scenario("beta0 = 7").pr.sinr_threshold == 7.0);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_scenario("rho0 = 20\nrho1 = 0.2\nr0 = -5\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_scenario("bogus_key = 1"), parse_error);
    CHECK_THROWS_AS(parse_scenario("rho0 = fast"), parse_error);
    CHECK_THROWS_AS(parse_scenario("rho0 20"), parse_error);
    CHECK_THROWS_AS(parse_scenario("rho0 = 20\nrho0 = 21"), parse_error);
    CHECK_THROWS_AS(parse_scenario("eps0 = 1.5"), parse_error);
    CHECK_THROWS_AS(parse_scenario("alpha = 2"), parse_error);
    CHECK_THROWS_AS(parse_scenario("trials = 3.5"), parse_error);
    CHECK_THROWS_AS(parse_scenario("trials = -2"), parse_error);
}

TEST_CASE("sweep specification") {
    const Scenario list = parse_scenario("sweep_var = delta_eps\nsweep_grid = 0.005,0.01,0.02\n");
    CHECK(list.sweep_var == SweepVar::delta_eps);
    REQUIRE(list.sweep_grid.size() == 3);
    CHECK(list.sweep_grid[1] == 0.01);

    const Scenario lin = parse_scenario("sweep_var = eps0\nsweep_grid = 0.1:0.5:5\n");
    REQUIRE(lin.sweep_grid.size() == 5);
    CHECK(lin.sweep_grid.front() == 0.1);
    CHECK(lin.sweep_grid.back() == 0.5);
    CHECK(lin.sweep_grid[2] == Approx(0.3).epsilon(1e-15));

    CHECK_THROWS_AS(parse_scenario("sweep_var = eps0\nsweep_grid = 0.2,0.1"), parse_error);
    CHECK_THROWS_AS(parse_scenario("sweep_var = eps0"), parse_error);
    CHECK_THROWS_AS(parse_scenario("sweep_grid = 0.1,0.2"), parse_error);
    CHECK_THROWS_AS(parse_scenario("sweep_var = delta_eps\nsweep_grid = 0.5,1.5"), parse_error);
    CHECK_THROWS_AS(parse_scenario("sweep_var = rho1\nsweep_grid = 0,0.1"), parse_error);
    CHECK_THROWS_AS(parse_scenario("sweep_var = r0\nsweep_grid = 1,2"), parse_error);
}

TEST_CASE("remaining keys") {
    const Scenario sc = parse_scenario(
        "eps1_target = 0.02\n"
        "lambda1 = 3.4e-5\n"
        "density_model = exact\n"
        "trials = 5000\n"
        "seed = 987654321\n"
        "window_radius = 2000\n"
        "bias_fraction = 1e-4\n"
        "samples_out = /tmp/samples.bin\n");
    CHECK(sc.eps1_target == 0.02);
    CHECK(sc.lambda1 == 3.4e-5);
    CHECK(sc.density_model == DensityModel::exact);
    CHECK(sc.sim.trials == 5000);
    CHECK(sc.sim.seed == 987654321);
    CHECK(sc.sim.window_radius == 2000.0);
    CHECK(sc.sim.bias_fraction == 1e-4);
    CHECK(sc.sim.samples_out == "/tmp/samples.bin");

    CHECK_THROWS_AS(parse_scenario("density_model = sometimes"), parse_error);
}

TEST_CASE("emit/parse round trip") {
    CHECK(parse_scenario(emit_scenario(Scenario::defaults())) == Scenario::defaults());

    Scenario full;
    full.pr = {17.25, 21.5, std::pow(10.0, 1.3), 2.5};
    full.sr = {0.30000000000000004, 4.75, 9.995, 0.5};
    full.ch = {4.0, 1.5, 3.3e-7};
    full.eps0 = 0.015;
    full.delta_eps = 0.0075;
    full.eps1_target = 0.019;
    full.lambda1 = 2.2e-5;
    full.density_model = DensityModel::exact;
    full.sweep_var = SweepVar::rho1;
    full.sweep_grid = {0.05, 0.1, 0.2};
    full.sim.trials = 12345;
    full.sim.seed = 0xDEADBEEFull;
    full.sim.window_radius = 1912.75;
    full.sim.bias_fraction = 2e-4;
    full.sim.samples_out = "run.csv";
    CHECK(parse_scenario(emit_scenario(full)) == full);

    // randomized round trips exercise the double formatting
    oracle::Rng rng(60);
    for (int i = 0; i < 50; ++i) {
        Scenario sc;
        sc.pr.power = rng.log_uniform(1e-3, 1e3);
        sc.sr.range = rng.uniform(0.1, 100.0);
        sc.ch.noise = rng.log_uniform(1e-12, 1e-3);
        sc.eps0 = rng.uniform(1e-6, 0.5);
        sc.sim.seed = rng.integer();
        sc.sim.trials = 1 + (rng.integer() % 1000000);
        CHECK(parse_scenario(emit_scenario(sc)) == sc);
    }
}
