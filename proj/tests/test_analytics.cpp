#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "floodnet/analytics.hpp"
#include "oracles.hpp"

using namespace floodnet;

namespace {

// Literal one-step evaluation of the dead-end system,
//   q_b' = (sum_c [1 - f(b,c) + f(b,c) q_c] c P(c)/Z)^(b-1),
// as an O(D^2) oracle for the solver's prefix/suffix kernel.
std::vector<double> dead_end_step(const DegreeModel& model, const FloodRule& rule,
                                  const std::vector<double>& q) {
    const int D = model.max_degree();
    const std::vector<double> e = model.edge_end_pmf();
    std::vector<double> next(D + 1, 1.0);
    for (int b = 1; b <= D; ++b) {
        double mass = 0.0;
        for (int c = 1; c <= D; ++c) {
            const double f = rule.forward_probability(b, c);
            mass += (1.0 - f + f * q[c]) * e[c];
        }
        next[b] = std::pow(mass, b - 1);
    }
    return next;
}

}  // namespace

TEST_CASE("GCC analysis on Poisson models") {
    const DegreeModel m = DegreeModel::poisson(2.0, 200);
    const GccAnalysis g = gcc_analysis(m, 10000);

    const double q_oracle = oracles::poisson_q(2.0);
    CHECK(g.q == doctest::Approx(q_oracle).epsilon(1e-9));
    CHECK(g.q == doctest::Approx(0.20319).epsilon(1e-4));
    CHECK(g.theta_g == doctest::Approx(1.0 - q_oracle).epsilon(1e-9));
    CHECK(g.theta_g == doctest::Approx(0.79681).epsilon(1e-4));

    // G1(q) = q at the solution.
    CHECK(std::abs(m.g0_prime(g.q) / m.mean_degree() - g.q) < 1e-9);

    REQUIRE(g.z_gcc.has_value());
    REQUIRE(g.l_gcc.has_value());
    CHECK(*g.z_gcc > m.mean_degree());  // GCC nodes are better connected
    CHECK(*g.l_gcc >= 1.0);
    CHECK(*g.z2_gcc >= 0.0);
}

TEST_CASE("GCC analysis degenerate and near-critical cases") {
    SUBCASE("point mass at degree 1: below the transition") {
        const DegreeModel m = DegreeModel::empirical({0.0, 1.0}, 2);
        const GccAnalysis g = gcc_analysis(m, 1000);
        CHECK(g.q == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(g.theta_g == 0.0);
        CHECK_FALSE(g.z_gcc.has_value());
        CHECK_FALSE(g.l_gcc.has_value());
    }
    SUBCASE("theta vanishes continuously as z approaches 1") {
        const double t102 = gcc_analysis(DegreeModel::poisson(1.02, 400), 10000).theta_g;
        const double t110 = gcc_analysis(DegreeModel::poisson(1.10, 400), 10000).theta_g;
        const double t130 = gcc_analysis(DegreeModel::poisson(1.30, 400), 10000).theta_g;
        CHECK(t102 > 0.0);
        CHECK(t102 < 0.08);
        CHECK(t102 < t110);
        CHECK(t110 < t130);
    }
    SUBCASE("all-isolated model is an error") {
        const DegreeModel m = DegreeModel::empirical({1.0}, 1);
        CHECK_THROWS_AS(gcc_analysis(m, 100), std::invalid_argument);
    }
}

TEST_CASE("dead-end system solutions") {
    SUBCASE("uninformed: q_b collapses to q^(b-1)") {
        for (const DegreeModel& m :
             {DegreeModel::poisson(3.0, 150), DegreeModel::power_law(2.5, 500)}) {
            const GccAnalysis g = gcc_analysis(m, 1000);
            const auto q = solve_dead_end_probs(m, FloodRule::uninformed(), Direction::out);
            for (int b = 1; b <= std::min(40, m.max_degree()); ++b)
                CHECK(q[b] == doctest::Approx(std::pow(g.q, b - 1)).epsilon(1e-9));
        }
    }
    SUBCASE("p = 0: everything is a dead-end") {
        const DegreeModel m = DegreeModel::poisson(4.0, 100);
        const auto q = solve_dead_end_probs(m, FloodRule::probabilistic(0.0), Direction::out);
        for (int b = 1; b <= 100; ++b) CHECK(q[b] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("solution is a fixed point of the literal equations") {
        const DegreeModel m = DegreeModel::poisson(4.0, 150);
        for (const FloodRule& rule : {FloodRule::probabilistic(0.5), FloodRule::heuristic(0.9)}) {
            const auto q = solve_dead_end_probs(m, rule, Direction::out);
            const auto next = dead_end_step(m, rule, q);
            for (int b = 1; b <= 150; ++b) CHECK(std::abs(next[b] - q[b]) < 1e-11);
        }
    }
    SUBCASE("both directions coincide for symmetric rules") {
        const DegreeModel m = DegreeModel::power_law(2.3, 400);
        for (const FloodRule& rule : {FloodRule::probabilistic(0.7), FloodRule::heuristic(0.95)}) {
            const auto out = solve_dead_end_probs(m, rule, Direction::out);
            const auto in = solve_dead_end_probs(m, rule, Direction::in);
            for (int b = 0; b <= 400; ++b) CHECK(std::abs(out[b] - in[b]) < 1e-12);
        }
    }
    SUBCASE("values stay in [0,1]") {
        const DegreeModel m = DegreeModel::power_law(2.2, 600);
        const auto q = solve_dead_end_probs(m, FloodRule::heuristic(0.99), Direction::out);
        for (double v : q) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("giant in/out fractions") {
    SUBCASE("uninformed reduces to theta_G") {
        for (const DegreeModel& m :
             {DegreeModel::poisson(3.0, 150), DegreeModel::power_law(2.5, 500)}) {
            const GccAnalysis g = gcc_analysis(m, 1000);
            const auto [ti, to] = giant_fractions(m, FloodRule::uninformed());
            CHECK(ti == doctest::Approx(g.theta_g).epsilon(1e-9));
            CHECK(to == doctest::Approx(g.theta_g).epsilon(1e-9));
        }
    }
    SUBCASE("p = 0 kills both components") {
        const auto [ti, to] =
            giant_fractions(DegreeModel::poisson(5.0, 100), FloodRule::probabilistic(0.0));
        CHECK(ti == 0.0);
        CHECK(to == 0.0);
    }
    SUBCASE("in and out fractions agree for all shipped rules") {
        const DegreeModel m = DegreeModel::poisson(6.0, 200);
        for (const FloodRule& rule :
             {FloodRule::uninformed(), FloodRule::probabilistic(0.6), FloodRule::heuristic(0.9)}) {
            const auto [ti, to] = giant_fractions(m, rule);
            CHECK(std::abs(ti - to) < 1e-9);
            CHECK(ti >= 0.0);
            CHECK(ti <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("reach prediction P_n") {
    SUBCASE("uninformed reaches everything") {
        CHECK(predict_pn(DegreeModel::poisson(4.0, 150), FloodRule::uninformed()) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("threshold values on Poisson graphs") {
        CHECK(predict_pn(DegreeModel::poisson(5.0, 200), FloodRule::probabilistic(0.90)) >= 0.99);
        CHECK(predict_pn(DegreeModel::poisson(9.0, 250), FloodRule::probabilistic(0.60)) >= 0.99);
        CHECK(predict_pn(DegreeModel::poisson(4.0, 200), FloodRule::probabilistic(0.90)) < 0.99);
        // Frozen from an independent numerical evaluation of the system.
        CHECK(predict_pn(DegreeModel::poisson(5.0, 200), FloodRule::probabilistic(0.90)) ==
              doctest::Approx(0.990490).epsilon(1e-4));
    }
    SUBCASE("heuristic plateau at z = 10") {
        const DegreeModel m = DegreeModel::poisson(10.0, 300);
        CHECK(std::abs(predict_pn(m, FloodRule::heuristic(0.99)) - 0.99) < 0.015);
        CHECK(std::abs(predict_pn(m, FloodRule::heuristic(0.95)) - 0.94) < 0.015);
        CHECK(std::abs(predict_pn(m, FloodRule::heuristic(0.90)) - 0.86) < 0.015);
    }
    SUBCASE("no giant component is an error") {
        const DegreeModel m = DegreeModel::empirical({0.0, 1.0}, 2);
        CHECK_THROWS_AS(predict_pn(m, FloodRule::probabilistic(0.9)), std::runtime_error);
    }
    SUBCASE("below the digraph transition the prediction is zero") {
        CHECK(predict_pn(DegreeModel::poisson(3.0, 150), FloodRule::probabilistic(0.3)) == 0.0);
    }
    SUBCASE("monotone in p") {
        const DegreeModel m = DegreeModel::poisson(5.0, 200);
        double prev = -1.0;
        for (int i = 1; i <= 20; ++i) {
            const double pn = predict_pn(m, FloodRule::probabilistic(0.05 * i));
            CHECK(pn >= prev - 1e-12);
            CHECK(pn >= 0.0);
            CHECK(pn <= 1.0 + 1e-12);
            prev = pn;
        }
    }
}

TEST_CASE("message-ratio prediction P_m") {
    SUBCASE("uninformed sends the full message budget") {
        CHECK(predict_pm(DegreeModel::poisson(4.0, 150), FloodRule::uninformed()) ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(predict_pm(DegreeModel::power_law(2.5, 500), FloodRule::uninformed()) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("plateau near p on dense Poisson graphs") {
        const double pm = predict_pm(DegreeModel::poisson(10.0, 300), FloodRule::probabilistic(0.60));
        CHECK(std::abs(pm - 0.60) < 0.02);
    }
    SUBCASE("p = 0 sends nothing") {
        CHECK(predict_pm(DegreeModel::poisson(10.0, 300), FloodRule::probabilistic(0.0)) == 0.0);
    }
}

TEST_CASE("waiting-time prediction P_t") {
    SUBCASE("p = 1 reduces to the GCC path length") {
        const auto pt = predict_pt(DegreeModel::poisson(4.0, 9999), FloodRule::probabilistic(1.0), 10000);
        REQUIRE(pt.has_value());
        CHECK(*pt == doctest::Approx(1.0).epsilon(2e-2));
    }
    SUBCASE("heuristic on power-law models is unsupported") {
        const auto pt = predict_pt(DegreeModel::power_law(2.5, 500), FloodRule::heuristic(0.99), 10000);
        CHECK_FALSE(pt.has_value());
    }
    SUBCASE("heuristic on Poisson uses the branching-factor route") {
        const auto pt = predict_pt(DegreeModel::poisson(10.0, 300), FloodRule::heuristic(0.95), 10000);
        REQUIRE(pt.has_value());
        CHECK(std::abs(*pt - 2.0139) < 0.01);  // frozen from an independent evaluation
        CHECK(*pt > 1.0);
    }
    SUBCASE("probabilistic on power-law models carries a quality warning") {
        const DigraphAnalysis a =
            analyze_digraph(DegreeModel::power_law(2.5, 2000), FloodRule::probabilistic(0.9), 10000);
        CHECK(a.pt_quality_warning);
        CHECK(a.p_t.has_value());
        const DigraphAnalysis b =
            analyze_digraph(DegreeModel::poisson(6.0, 200), FloodRule::probabilistic(0.9), 10000);
        CHECK_FALSE(b.pt_quality_warning);
    }
    SUBCASE("no giant out-component is an error") {
        CHECK_THROWS_AS(predict_pt(DegreeModel::poisson(3.0, 150), FloodRule::probabilistic(0.3), 2000),
                        std::runtime_error);
    }
}

TEST_CASE("uninformed degeneracy ties the digraph analysis to the GCC analysis") {
    const DegreeModel m = DegreeModel::poisson(4.0, 2000);
    const long long n = 10000;
    const GccAnalysis g = gcc_analysis(m, n);
    const DigraphAnalysis d = analyze_digraph(m, FloodRule::uninformed(), n);
    REQUIRE(g.z_gcc.has_value());
    REQUIRE(g.l_gcc.has_value());
    REQUIRE(d.l_gout.has_value());
    CHECK(std::abs(d.theta_in - g.theta_g) < 1e-6);
    CHECK(std::abs(d.theta_out - g.theta_g) < 1e-6);
    CHECK(std::abs(d.z_gout - *g.z_gcc) < 1e-6);
    CHECK(std::abs(d.z2_gout - *g.z2_gcc) < 1e-6);
    CHECK(std::abs(*d.l_gout - *g.l_gcc) < 1e-6);
}

TEST_CASE("analyze_digraph agrees with the standalone operations bit for bit") {
    const DegreeModel m = DegreeModel::poisson(6.0, 200);
    const FloodRule rule = FloodRule::probabilistic(0.6);
    const DigraphAnalysis a = analyze_digraph(m, rule, 10000);

    CHECK(a.p_n == predict_pn(m, rule));
    CHECK(a.p_m == predict_pm(m, rule));
    const auto pt = predict_pt(m, rule, 10000);
    REQUIRE(pt.has_value());
    REQUIRE(a.p_t.has_value());
    CHECK(*a.p_t == *pt);
    CHECK(a.q_out == solve_dead_end_probs(m, rule, Direction::out));
    const auto [ti, to] = giant_fractions(m, rule);
    CHECK(a.theta_in == ti);
    CHECK(a.theta_out == to);
}

TEST_CASE("predictions stay in range across a model/rule grid") {
    const std::vector<DegreeModel> models = {
        DegreeModel::poisson(2.0, 150), DegreeModel::poisson(6.0, 200),
        DegreeModel::power_law(2.2, 800), DegreeModel::power_law(2.8, 800)};
    const std::vector<FloodRule> rules = {
        FloodRule::uninformed(), FloodRule::probabilistic(0.3), FloodRule::probabilistic(0.9),
        FloodRule::heuristic(0.9), FloodRule::heuristic(0.99)};
    for (const auto& m : models) {
        for (const auto& rule : rules) {
            const DigraphAnalysis a = analyze_digraph(m, rule, 2000);
            CHECK(a.theta_in >= 0.0);
            CHECK(a.theta_in <= 1.0 + 1e-12);
            CHECK(a.theta_out >= 0.0);
            CHECK(a.theta_out <= 1.0 + 1e-12);
            CHECK(a.p_n >= 0.0);
            CHECK(a.p_n <= 1.0 + 1e-12);
            CHECK(a.p_m >= 0.0);
        }
    }
}
