#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "gig/deterministic.hpp"
#include "gig/simulate.hpp"

using namespace gig;

namespace {

ModelParams baseline(double sigma = 0.0) { return validate_params(1.0, 1.0, 0.8, 0.8, sigma); }

bool summaries_identical(const SimulationSummary& a, const SimulationSummary& b) {
    return a.profit_per_round.mean == b.profit_per_round.mean &&
           a.profit_per_round.se == b.profit_per_round.se &&
           a.net_wage_per_round.mean == b.net_wage_per_round.mean &&
           a.net_wage_per_round.se == b.net_wage_per_round.se &&
           a.employment_rate == b.employment_rate &&
           a.net_wage_given_contract.mean == b.net_wage_given_contract.mean &&
           a.net_wage_given_contract.se == b.net_wage_given_contract.se &&
           a.discounted_profit.mean == b.discounted_profit.mean &&
           a.discounted_profit.se == b.discounted_profit.se &&
           a.final_reference.mean == b.final_reference.mean &&
           a.final_reference.stdev == b.final_reference.stdev &&
           a.final_reference.min == b.final_reference.min &&
           a.final_reference.max == b.final_reference.max &&
           a.contracted_rounds == b.contracted_rounds;
}

}  // namespace

TEST_CASE("sigma = 0 closed-form run reproduces the deterministic steady state") {
    SimulationConfig cfg;
    cfg.r0 = 0.1;
    cfg.rounds = 20;
    cfg.paths = 50;
    cfg.seed = 7;
    SimulationSummary s = simulate(baseline(), EmployerPolicy::closed_form(), cfg);
    CHECK(s.employment_rate == 1.0);
    CHECK(s.profit_per_round.mean == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(s.profit_per_round.se == 0.0);
    CHECK(s.net_wage_per_round.mean == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.net_wage_per_round.se == 0.0);
    CHECK(s.final_reference.stdev == 0.0);
    CHECK(s.final_reference.mean == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("sigma = 0 paths coincide row by row with the deterministic trajectory") {
    ModelParams p = baseline();
    for (double r0 : {0.53, 0.42, 0.1}) {
        auto rows = trajectory(p, r0, 20);
        SimulationConfig cfg;
        cfg.r0 = r0;
        cfg.rounds = 20;
        cfg.paths = 1;
        std::vector<RoundRecord> log;
        simulate(p, EmployerPolicy::closed_form(), cfg,
                 [&](const RoundRecord& rec) { log.push_back(rec); });
        REQUIRE(log.size() == rows.size());
        for (std::size_t t = 0; t < rows.size(); ++t) {
            CHECK(log[t].r == doctest::Approx(rows[t].r).epsilon(1e-12));
            CHECK(log[t].contract.chi == rows[t].chi);
            if (rows[t].chi) {
                CHECK(log[t].contract.s == doctest::Approx(rows[t].s));
                CHECK(log[t].contract.f == doctest::Approx(rows[t].f).epsilon(1e-12));
                CHECK(log[t].outcome.v == doctest::Approx(rows[t].v).epsilon(1e-12));
                CHECK(log[t].outcome.pi == doctest::Approx(rows[t].pi).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("single no-contract round") {
    SimulationConfig cfg;
    cfg.r0 = 0.5;
    cfg.rounds = 1;
    cfg.paths = 1;
    SimulationSummary s = simulate(baseline(), EmployerPolicy::closed_form(), cfg);
    CHECK(s.employment_rate == 0.0);
    CHECK(s.profit_per_round.mean == 0.0);
    CHECK(s.net_wage_per_round.mean == 0.0);
    CHECK(s.net_wage_given_contract.mean == 0.0);
    CHECK(s.discounted_profit.mean == 0.0);
    CHECK(s.final_reference.mean == doctest::Approx(0.4));
    CHECK(s.contracted_rounds == 0);
}

TEST_CASE("same seed is bit-identical across runs and thread counts") {
    ModelParams p = baseline(0.1);
    SimulationConfig cfg;
    cfg.r0 = 0.2;
    cfg.rounds = 30;
    cfg.paths = 400;
    cfg.seed = 20240601;

    SimulationSummary base = simulate(p, EmployerPolicy::closed_form(), cfg);
    SimulationSummary again = simulate(p, EmployerPolicy::closed_form(), cfg);
    CHECK(summaries_identical(base, again));

    for (int threads : {2, 3, 7}) {
        SimulationConfig threaded = cfg;
        threaded.threads = threads;
        CHECK(summaries_identical(base, simulate(p, EmployerPolicy::closed_form(), threaded)));
    }

    SimulationConfig other = cfg;
    other.seed = 1;
    CHECK_FALSE(summaries_identical(base, simulate(p, EmployerPolicy::closed_form(), other)));
}

TEST_CASE("forced contracts at a pinned reference are unbiased") {
    // E[v] = r + gamma s^2 sigma^2/2, E[pi] = s/c - s^2(1/(2c) + gamma sigma^2/2) - r
    ModelParams p = baseline(0.1);
    SimulationConfig cfg;
    cfg.r0 = 0.2;
    cfg.rounds = 50;
    cfg.paths = 2000;
    cfg.seed = 99;
    cfg.pin_reference = true;
    cfg.forced_share = 1.0;
    SimulationSummary s = simulate(p, EmployerPolicy::closed_form(), cfg);

    CHECK(s.employment_rate == 1.0);
    CHECK(s.contracted_rounds == 100000);
    CHECK(std::abs(s.net_wage_given_contract.mean - 0.205) <=
          3.0 * s.net_wage_given_contract.se);
    // with s = 1 the (1-s) eps term vanishes, so profit is exactly constant
    // and only floating-point accumulation separates the mean from 0.295
    CHECK(std::abs(s.profit_per_round.mean - 0.295) <= 3.0 * s.profit_per_round.se + 1e-12);
    CHECK(s.final_reference.mean == doctest::Approx(0.2));  // pinned
    CHECK(s.net_wage_given_contract.se > 0.0);
    CHECK(s.net_wage_given_contract.se < 1e-3);

    // at r = 0 only the risk premium remains: E[v] = gamma s^2 sigma^2/2 = 0.005
    cfg.r0 = 0.0;
    SimulationSummary zero = simulate(p, EmployerPolicy::closed_form(), cfg);
    CHECK(std::abs(zero.net_wage_given_contract.mean - 0.005) <=
          3.0 * zero.net_wage_given_contract.se);
}

TEST_CASE("reference drift over contracted rounds matches drift_check") {
    ModelParams p = baseline(0.1);
    CHECK(drift_check(p, 1.0) == doctest::Approx(0.001));
    CHECK(drift_check(p, 0.0) == 0.0);
    CHECK(drift_check(baseline(0.0), 1.0) == 0.0);

    SimulationConfig cfg;
    cfg.r0 = 0.0;
    cfg.rounds = 40;
    cfg.paths = 2500;
    cfg.seed = 31;
    cfg.forced_share = 1.0;

    double sum = 0.0;
    double sum_sq = 0.0;
    long n = 0;
    simulate(p, EmployerPolicy::closed_form(), cfg, [&](const RoundRecord& rec) {
        double d = rec.outcome.r_next - rec.r;
        sum += d;
        sum_sq += d * d;
        ++n;
    });
    double mean = sum / n;
    double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - drift_check(p, 1.0)) <= 3.0 * se);
}

TEST_CASE("split identity holds on noisy realized rounds") {
    ModelParams p = baseline(0.2);
    SimulationConfig cfg;
    cfg.r0 = 0.1;
    cfg.rounds = 50;
    cfg.paths = 200;
    cfg.seed = 5;
    simulate(p, EmployerPolicy::closed_form(), cfg, [&](const RoundRecord& rec) {
        if (rec.contract.chi) {
            double net = rec.outcome.x - p.c * rec.outcome.z * rec.outcome.z / 2.0;
            CHECK(rec.outcome.v + rec.outcome.pi == doctest::Approx(net).epsilon(1e-12));
        }
    });
}

TEST_CASE("tabulated policies clamp to their grid") {
    ModelParams p = baseline();
    PolicyTable table;
    table.grid = GridSpec{0.0, 0.5, 6};
    table.chi.resize(6);
    table.s.resize(6);
    // contract below 0.3 with s = 1, idle above
    for (int i = 0; i < 6; ++i) {
        table.chi[i] = i <= 3;
        table.s[i] = i <= 3 ? 1.0 : 0.0;
    }

    CHECK(policy_decision(p, EmployerPolicy::tabulated(table), -2.0).chi);
    CHECK(policy_decision(p, EmployerPolicy::tabulated(table), 0.15).s == doctest::Approx(1.0));
    CHECK_FALSE(policy_decision(p, EmployerPolicy::tabulated(table), 2.0).chi);
    // nearest node decides chi at the boundary; share never mixes with the
    // idle-node zero convention
    CHECK(policy_decision(p, EmployerPolicy::tabulated(table), 0.34).chi);
    CHECK(policy_decision(p, EmployerPolicy::tabulated(table), 0.34).s == doctest::Approx(1.0));
    CHECK_FALSE(policy_decision(p, EmployerPolicy::tabulated(table), 0.36).chi);

    EmployerPolicy missing{EmployerPolicy::Kind::tabulated, std::nullopt};
    CHECK_THROWS_AS(policy_decision(p, missing, 0.1), PolicyRangeError);

    SimulationConfig cfg;
    cfg.paths = 1;
    CHECK_THROWS_AS(simulate(p, missing, cfg), PolicyRangeError);

    PolicyTable degenerate = table;
    degenerate.chi.resize(3);
    CHECK_THROWS_AS(simulate(p, EmployerPolicy::tabulated(degenerate), cfg), PolicyRangeError);
}

TEST_CASE("config validation") {
    ModelParams p = baseline();
    SimulationConfig cfg;
    cfg.rounds = 0;
    CHECK_THROWS_AS(simulate(p, EmployerPolicy::closed_form(), cfg), DomainError);
    cfg = {};
    cfg.paths = 0;
    CHECK_THROWS_AS(simulate(p, EmployerPolicy::closed_form(), cfg), DomainError);
    cfg = {};
    cfg.burn_in = 25;  // >= rounds
    CHECK_THROWS_AS(simulate(p, EmployerPolicy::closed_form(), cfg), DomainError);
}

TEST_CASE("burn-in drops the transient from per-round statistics") {
    ModelParams p = baseline();
    SimulationConfig cfg;
    cfg.r0 = 0.53;  // three idle rounds before contracting at 0.27136
    cfg.rounds = 23;
    cfg.paths = 2;
    cfg.burn_in = 3;
    SimulationSummary s = simulate(p, EmployerPolicy::closed_form(), cfg);
    CHECK(s.employment_rate == 1.0);
    CHECK(s.net_wage_per_round.mean == doctest::Approx(0.27136).epsilon(1e-12));
}
