#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "floodnet/experiments.hpp"

using namespace floodnet;

namespace {

SweepConfig desk_config() {
    SweepConfig c;
    c.family = ModelFamily::poisson;
    c.grid = {6.0};
    c.n = 500;
    c.rules = {FloodRule::uninformed()};
    c.graphs = 2;
    c.instances = 10;
    c.seed = 42;
    return c;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    write_csv(rows, os);
    return os.str();
}

}  // namespace

TEST_CASE("calibration inverts the reach prediction") {
    const DegreeModel model = DegreeModel::poisson(5.0, 200);
    SUBCASE("round trip") {
        const double target = predict_pn(model, FloodRule::probabilistic(0.7));
        const double p = calibrate_p(model, target, 1e-5);
        CHECK(std::abs(p - 0.7) < 1e-4);
    }
    SUBCASE("unreachable and degenerate targets") {
        CHECK_THROWS_AS(calibrate_p(model, 1.01, 1e-4), std::runtime_error);
        CHECK_THROWS_AS(calibrate_p(model, 1.0, 1e-4), std::runtime_error);
        CHECK_THROWS_AS(calibrate_p(model, 0.0, 1e-4), std::invalid_argument);
        CHECK_THROWS_AS(calibrate_p(model, 0.5, 0.0), std::invalid_argument);
    }
}

TEST_CASE("uninformed sweep rows are exactly unity") {
    const auto rows = run_sweep(desk_config());
    REQUIRE(rows.size() == 1);
    const SweepRow& r = rows[0];
    REQUIRE(r.error.empty());
    CHECK(*r.pn_sim == 1.0);
    CHECK(*r.pm_sim == 1.0);
    CHECK(*r.pt_sim == 1.0);
    CHECK(*r.pn_pred == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(*r.pm_pred == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(r.rule_param.has_value());
    CHECK(r.rule == "uninformed");
}

TEST_CASE("sweep output is byte-identical across reruns and thread counts") {
    SweepConfig c = desk_config();
    c.grid = {4.0, 7.0};
    c.rules = {FloodRule::probabilistic(0.8), FloodRule::heuristic(0.9)};
    c.threads = 1;
    const std::string serial = to_csv(run_sweep(c));
    c.threads = 4;
    const std::string parallel = to_csv(run_sweep(c));
    CHECK(serial == parallel);
    CHECK(to_csv(run_sweep(c)) == parallel);
}

TEST_CASE("predicted columns equal a standalone analytics invocation") {
    SweepConfig c = desk_config();
    c.grid = {5.0};
    c.rules = {FloodRule::probabilistic(0.75)};
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 1);
    const DegreeModel model = c.model_at(5.0);
    CHECK(*rows[0].pn_pred == predict_pn(model, c.rules[0]));
    CHECK(*rows[0].pm_pred == predict_pm(model, c.rules[0]));
    const auto pt = predict_pt(model, c.rules[0], c.n);
    REQUIRE(pt.has_value());
    CHECK(*rows[0].pt_pred == *pt);
}

TEST_CASE("pooled standard errors shrink with more instances") {
    SweepConfig small = desk_config();
    small.grid = {6.0};
    small.rules = {FloodRule::probabilistic(0.6)};
    small.n = 400;
    small.instances = 20;
    SweepConfig big = small;
    big.instances = 500;
    const auto rows_small = run_sweep(small);
    const auto rows_big = run_sweep(big);
    REQUIRE(rows_small[0].error.empty());
    REQUIRE(rows_big[0].error.empty());
    CHECK(rows_big[0].pn_se < rows_small[0].pn_se);
}

TEST_CASE("comparison pairs heuristic with a calibrated probabilistic run") {
    SweepConfig c;
    c.family = ModelFamily::poisson;
    c.grid = {6.0};
    c.n = 1000;
    c.rules = {FloodRule::heuristic(0.99)};
    c.graphs = 3;
    c.instances = 150;
    c.seed = 7;
    const auto rows = run_comparison(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].rule == "heuristic");
    CHECK(rows[1].rule == "probabilistic");
    REQUIRE(rows[0].error.empty());
    REQUIRE(rows[1].error.empty());
    REQUIRE(rows[1].rule_param.has_value());
    CHECK(*rows[1].rule_param > 0.0);
    CHECK(*rows[1].rule_param < 1.0);
    CHECK(std::abs(*rows[0].pn_sim - *rows[1].pn_sim) < 0.03);
}

TEST_CASE("desk-scale reach at the z=5, p=0.9 threshold") {
    SweepConfig c = desk_config();
    c.grid = {5.0};
    c.n = 2000;
    c.rules = {FloodRule::probabilistic(0.90)};
    c.graphs = 5;
    c.instances = 200;
    const auto rows = run_sweep(c);
    REQUIRE(rows[0].error.empty());
    CHECK(*rows[0].pn_sim >= 0.98);
}

TEST_CASE("heuristic flooding needs far fewer messages on heavy-tailed graphs") {
    // With tau near 2 the calibrated probabilistic run must push p close
    // to 1, so its message ratio stays high while the heuristic's drops.
    SweepConfig c;
    c.family = ModelFamily::power_law;
    c.grid = {2.1};
    c.n = 10000;
    c.rules = {FloodRule::heuristic(0.99)};
    c.graphs = 3;
    c.instances = 150;
    c.seed = 17;
    const auto rows = run_comparison(c);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].error.empty());
    REQUIRE(rows[1].error.empty());
    CHECK(*rows[1].rule_param > 0.9);
    CHECK(*rows[1].pm_sim / *rows[0].pm_sim > 1.5);
}

TEST_CASE("comparison requires a single heuristic rule") {
    SweepConfig c = desk_config();
    c.rules = {FloodRule::probabilistic(0.5)};
    CHECK_THROWS_AS(run_comparison(c), std::invalid_argument);
    c.rules = {FloodRule::heuristic(0.9), FloodRule::heuristic(0.95)};
    CHECK_THROWS_AS(run_comparison(c), std::invalid_argument);
}

TEST_CASE("CSV schema") {
    SweepConfig c = desk_config();
    c.family = ModelFamily::power_law;
    c.grid = {2.5};
    c.n = 300;
    c.rules = {FloodRule::heuristic(0.9)};
    c.graphs = 1;
    c.instances = 5;
    const auto rows = run_sweep(c);
    const std::string csv = to_csv(rows);

    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "family,param,rule,rule_param,pn_sim,pn_se,pm_sim,pm_se,pt_sim,pt_se,"
          "pn_pred,pm_pred,pt_pred,graphs,instances,n,seed");

    // Heuristic x power-law has no analytical P_t: the field stays empty.
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].pt_pred.has_value());
    const std::string line = csv.substr(csv.find('\n') + 1);
    int commas = 0;
    for (char ch : line)
        if (ch == ',') ++commas;
    CHECK(commas == 16);
    CHECK(line.find("power_law,2.5,heuristic,0.9,") == 0);
}

TEST_CASE("JSON config loading mirrors the sweep config") {
    std::istringstream is(R"json({
        "family": "power_law",
        "grid": [2.2, 2.8],
        "n": 5000,
        "rules": [{"kind": "uninformed"},
                  {"kind": "probabilistic", "p": 0.9},
                  {"kind": "heuristic", "alpha": 0.95}],
        "graphs": 7,
        "instances": 123,
        "seed": 99,
        "out": "rows.csv",
        "format": "json",
        "max_degree": 400,
        "allow_below_transition": true,
        "threads": 2
    })json");
    const SweepConfig c = load_config_json(is);
    CHECK(c.family == ModelFamily::power_law);
    CHECK(c.grid == std::vector<double>{2.2, 2.8});
    CHECK(c.n == 5000);
    REQUIRE(c.rules.size() == 3);
    CHECK(c.rules[0].kind() == RuleKind::uninformed);
    CHECK(c.rules[1].kind() == RuleKind::probabilistic);
    CHECK(c.rules[1].param() == 0.9);
    CHECK(c.rules[2].kind() == RuleKind::heuristic);
    CHECK(c.rules[2].param() == 0.95);
    CHECK(c.graphs == 7);
    CHECK(c.instances == 123);
    CHECK(c.seed == 99);
    CHECK(c.out == "rows.csv");
    CHECK(c.format == OutputFormat::json);
    REQUIRE(c.max_degree.has_value());
    CHECK(*c.max_degree == 400);
    CHECK(c.allow_below_transition);
    CHECK(c.threads == 2);

    std::istringstream bad(R"json({"family": "exponential"})json");
    CHECK_THROWS_AS(load_config_json(bad), std::invalid_argument);
}

TEST_CASE("config validation") {
    SweepConfig c = desk_config();
    c.grid.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = desk_config();
    c.graphs = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = desk_config();
    c.grid = {0.8};  // below the phase transition
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.allow_below_transition = true;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("full-scale settings") {
    SweepConfig c = desk_config();
    c.apply_full_scale();
    CHECK(c.n == 10000);
    CHECK(c.graphs == 15);
    CHECK(c.instances == 1000);
    c.family = ModelFamily::power_law;
    c.apply_full_scale();
    CHECK(c.graphs == 300);
}

TEST_CASE("generation failures are recorded per point, not thrown") {
    SweepConfig c = desk_config();
    c.n = 500;
    c.grid = {6.0, 600.0};  // z = 600 > n-1 fails at generation time
    c.rules = {FloodRule::probabilistic(0.9)};
    c.instances = 5;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK(rows[0].pn_sim.has_value());
    CHECK_FALSE(rows[1].error.empty());
    CHECK_FALSE(rows[1].pn_sim.has_value());
}

TEST_CASE("below-transition points run when explicitly allowed") {
    SweepConfig c = desk_config();
    c.grid = {0.8};
    c.allow_below_transition = true;
    c.rules = {FloodRule::probabilistic(0.9)};
    c.instances = 10;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].error.empty());
    CHECK(*rows[0].pn_pred == 0.0);
    CHECK(rows[0].pn_sim.has_value());
}
