#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gig/model.hpp"
#include "gig/random.hpp"
#include "oracles.hpp"

using namespace gig;

namespace {

ModelParams baseline_params() { return validate_params(1.0, 1.0, 0.8, 0.8, 0.0); }

// Random valid parameter draws for the property tests. Ranges are chosen so
// that z* = s/c stays well inside the [-5, 5] search grid and the CARA
// exponent never saturates.
struct Draw {
    ModelParams p;
    double s;
    double f;
    double r;
};

Draw random_draw(PathRng& rng) {
    Draw d;
    double c = 0.3 + 2.7 * rng.next_unit();
    double gamma = 0.05 + 2.95 * rng.next_unit();
    double beta = 0.01 + 0.98 * rng.next_unit();
    double delta = 0.01 + 0.98 * rng.next_unit();
    double sigma = rng.next_unit();
    d.p = validate_params(c, gamma, beta, delta, sigma);
    d.s = -1.4 + 2.8 * rng.next_unit();
    d.f = -1.0 + 2.0 * rng.next_unit();
    d.r = -1.0 + 2.0 * rng.next_unit();
    return d;
}

}  // namespace

TEST_CASE("validate_params accepts the baseline and rejects each field") {
    ModelParams p = validate_params(1.0, 1.0, 0.8, 0.8, 0.0);
    CHECK(p.c == 1.0);
    CHECK(p.beta == 0.8);

    CHECK_THROWS_AS(validate_params(0.0, 1.0, 0.8, 0.8, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(-2.0, 1.0, 0.8, 0.8, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(1.0, -0.1, 0.8, 0.8, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, 1.0, 0.8, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.0, 0.8, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.8, 1.2, 0.0), DomainError);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.8, 0.8, -0.5), DomainError);

    // gamma = 0 admitted as the risk-neutral limit
    CHECK_NOTHROW(validate_params(1.0, 0.0, 0.8, 0.8, 0.0));

    try {
        validate_params(1.0, 1.0, 1.0, 0.8, 0.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.field() == "beta");
    }
}

TEST_CASE("optimal_effort is chi * s / c") {
    CHECK(optimal_effort(baseline_params(), Contract::offer(1.0, 0.0)) == doctest::Approx(1.0));
    CHECK(optimal_effort(baseline_params(), Contract::none()) == 0.0);

    ModelParams p = validate_params(2.0, 1.0, 0.8, 0.8, 0.0);
    Contract k = Contract::offer(0.5, 0.1);
    CHECK(optimal_effort(p, k) == doctest::Approx(0.25));

    // independent check: numeric argmax of the expected utility over z
    double z_hat = oracle::grid_argmax([&](double z) { return expected_utility(p, k, z); },
                                       -5.0, 5.0, 1e-4);
    CHECK(std::abs(z_hat - optimal_effort(p, k)) <= 1e-4);
}

TEST_CASE("expected_utility closed form") {
    ModelParams p = validate_params(1.0, 1.0, 0.8, 0.8, 0.0);
    CHECK(expected_utility(p, Contract::offer(0.0, 0.0), 0.0) == doctest::Approx(-1.0));
    CHECK(expected_utility(p, Contract::none(), 3.7) == 0.0);

    // exponent equals the certainty equivalent: 1 - 0.2222 - 0.5 = 0.2778
    Contract k = Contract::offer(1.0, -0.2222);
    double eu = expected_utility(p, k, 1.0);
    CHECK(eu == doctest::Approx(-std::exp(-0.2778)).epsilon(1e-12));
    CHECK(eu == doctest::Approx(-std::exp(-p.gamma * certainty_equivalent(p, k, 1.0))));
}

TEST_CASE("expected_utility saturates instead of overflowing") {
    ModelParams p = validate_params(1.0, 3.0, 0.8, 0.8, 0.0);
    double u = expected_utility(p, Contract::offer(0.0, -400.0), 0.0);
    CHECK(u == -std::numeric_limits<double>::infinity());
    double u2 = expected_utility(p, Contract::offer(0.0, 400.0), 0.0);
    CHECK(u2 == doctest::Approx(0.0));  // underflow of exp
}

TEST_CASE("certainty_equivalent") {
    ModelParams p = baseline_params();
    CHECK(certainty_equivalent(p, Contract::offer(0.0, 0.3), 0.0) == doctest::Approx(0.3));
    CHECK_THROWS_AS(certainty_equivalent(p, Contract::none(), 0.0), NoContract);

    // binding participation makes CE equal to the reference by construction
    Contract k = Contract::offer(1.0, binding_fix(p, 0.2, 1.0));
    CHECK(certainty_equivalent(p, k, 1.0) == doctest::Approx(0.2).epsilon(1e-12));

    // risk premium gamma s^2 sigma^2 / 2 = 1
    ModelParams risky = validate_params(1.0, 2.0, 0.8, 0.8, 1.0);
    Contract flat = Contract::offer(1.0, 0.0);
    CHECK(certainty_equivalent(risky, flat, 0.0) == doctest::Approx(-1.0));

    // Monte Carlo check: u^{-1}(E[u(v)]) must approach the certainty equivalent.
    // With z = 0: v = s*eps + f, u = -exp(-gamma v); E[u] = -exp(gamma^2 s^2 sigma^2 / 2).
    PathRng rng(20240601, 0);
    const int n = 200000;
    double sum_u = 0.0;
    for (int i = 0; i < n; ++i) {
        double eps = risky.sigma * rng.next_normal();
        double v = flat.s * eps + flat.f;
        sum_u += -std::exp(-risky.gamma * v);
    }
    double ce_mc = -std::log(-(sum_u / n)) / risky.gamma;
    CHECK(ce_mc == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("binding_fix pins the participation constraint") {
    ModelParams riskless = validate_params(1.0, 0.0, 0.8, 0.8, 0.0);
    CHECK(binding_fix(riskless, 0.2778, 1.0) == doctest::Approx(-0.2222));
    CHECK(binding_fix(riskless, 0.4, 0.0) == doctest::Approx(0.4));

    // -1/2 + 1/2 cancels
    ModelParams unit = validate_params(1.0, 1.0, 0.8, 0.8, 1.0);
    CHECK(binding_fix(unit, 0.0, 1.0) == doctest::Approx(0.0));
    Contract k = Contract::offer(1.0, binding_fix(unit, 0.0, 1.0));
    CHECK(certainty_equivalent(unit, k, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("expected_profit_binding") {
    ModelParams riskless = validate_params(1.0, 0.0, 0.8, 0.8, 0.0);
    CHECK(expected_profit_binding(riskless, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(expected_profit_binding(riskless, 0.2778, 1.0) == doctest::Approx(0.2222));

    ModelParams unit = validate_params(1.0, 1.0, 0.8, 0.8, 1.0);
    CHECK(expected_profit_binding(unit, 0.0, 0.5) == doctest::Approx(0.25));
    CHECK(one_shot_share(unit) == doctest::Approx(0.5));
}

TEST_CASE("one_shot_share maximizes the binding expected profit") {
    CHECK(one_shot_share(validate_params(1.0, 1.0, 0.8, 0.8, 0.0)) == doctest::Approx(1.0));

    ModelParams a = validate_params(1.0, 1.0, 0.8, 0.8, 1.0);
    CHECK(one_shot_share(a) == doctest::Approx(0.5));
    double s_hat = oracle::grid_argmax(
        [&](double s) { return expected_profit_binding(a, 0.3, s); }, -2.0, 2.0, 1e-5);
    CHECK(std::abs(s_hat - one_shot_share(a)) <= 1e-5);

    ModelParams b = validate_params(2.0, 1.0, 0.8, 0.8, 1.0);
    CHECK(one_shot_share(b) == doctest::Approx(1.0 / 3.0));
    s_hat = oracle::grid_argmax([&](double s) { return expected_profit_binding(b, 0.0, s); },
                                -2.0, 2.0, 1e-5);
    CHECK(std::abs(s_hat - one_shot_share(b)) <= 1e-5);
}

TEST_CASE("reference_update") {
    ModelParams p = baseline_params();
    CHECK(reference_update(p, 0.5, 123.0, false) == doctest::Approx(0.4));
    CHECK(reference_update(p, 0.2, 0.2, true) == doctest::Approx(0.2));
    CHECK(reference_update(p, 0.2, 0.45, true) == doctest::Approx(0.25));
}

TEST_CASE("realize_round: deterministic binding offer") {
    ModelParams p = baseline_params();
    Contract k = Contract::offer(1.0, binding_fix(p, 0.2, 1.0));
    RoundOutcome out = realize_round(p, WorkerState{0.2}, k, 0.0);
    CHECK(out.z == doctest::Approx(1.0));
    CHECK(out.x == doctest::Approx(1.0));
    CHECK(out.w == doctest::Approx(0.7));
    CHECK(out.v == doctest::Approx(0.2));
    CHECK(out.pi == doctest::Approx(0.3));
    CHECK(out.r_next == doctest::Approx(0.2));
}

TEST_CASE("realize_round: no contract zeroes everything and decays r") {
    ModelParams p = baseline_params();
    RoundOutcome out = realize_round(p, WorkerState{0.5}, Contract::none(), 0.77);
    CHECK(out.z == 0.0);
    CHECK(out.x == 0.0);
    CHECK(out.w == 0.0);
    CHECK(out.v == 0.0);
    CHECK(out.pi == 0.0);
    CHECK(out.r_next == doctest::Approx(0.4));
}

TEST_CASE("realize_round: noisy round matches the per-step equations") {
    // v = s eps + gamma s^2 sigma^2/2 + r, r' = r + (1-beta)(s eps + gamma s^2 sigma^2/2)
    ModelParams p = validate_params(1.0, 1.0, 0.8, 0.8, 0.1);
    Contract k = Contract::offer(1.0, binding_fix(p, 0.0, 1.0));
    RoundOutcome out = realize_round(p, WorkerState{0.0}, k, 0.1);
    CHECK(out.v == doctest::Approx(0.105).epsilon(1e-12));
    CHECK(out.r_next == doctest::Approx(0.021).epsilon(1e-12));
}

TEST_CASE("realize_round: rejects offers that break participation") {
    ModelParams p = baseline_params();
    Contract stingy = Contract::offer(1.0, binding_fix(p, 0.2, 1.0) - 1e-6);
    CHECK_THROWS_AS(realize_round(p, WorkerState{0.2}, stingy, 0.0), ParticipationViolated);
    // the binding offer itself always passes
    Contract binding = Contract::offer(1.0, binding_fix(p, 0.2, 1.0));
    CHECK_NOTHROW(realize_round(p, WorkerState{0.2}, binding, 0.0));
}

TEST_CASE("property: numeric argmax of expected utility matches s/c") {
    PathRng rng(20240601, 1);
    for (int i = 0; i < 200; ++i) {
        Draw d = random_draw(rng);
        Contract k = Contract::offer(d.s, d.f);
        double z_star = optimal_effort(d.p, k);
        double z_hat = oracle::grid_argmax(
            [&](double z) { return expected_utility(d.p, k, z); }, -5.0, 5.0, 1e-4);
        CHECK(std::abs(z_hat - z_star) <= 1e-4 + 1e-12);
    }
}

TEST_CASE("property: binding fix makes CE equal the reference") {
    PathRng rng(20240601, 2);
    for (int i = 0; i < 500; ++i) {
        Draw d = random_draw(rng);
        Contract k = Contract::offer(d.s, binding_fix(d.p, d.r, d.s));
        double ce = certainty_equivalent(d.p, k, d.s / d.p.c);
        CHECK(ce == doctest::Approx(d.r).epsilon(1e-12));
    }
}

TEST_CASE("property: net wage plus profit equals net production") {
    PathRng rng(20240601, 3);
    for (int i = 0; i < 500; ++i) {
        Draw d = random_draw(rng);
        double r_low = d.r - std::abs(d.s * d.s / d.p.c) - 1.0;  // keep the offer acceptable
        Contract k = Contract::offer(d.s, binding_fix(d.p, r_low, d.s));
        double eps = 3.0 * (rng.next_unit() - 0.5);
        RoundOutcome out = realize_round(d.p, WorkerState{r_low}, k, eps);
        double net = out.x - d.p.c * out.z * out.z / 2.0;
        CHECK(out.v + out.pi == doctest::Approx(net).epsilon(1e-12));
    }
}

TEST_CASE("property: one-shot share dominates every share on the grid") {
    PathRng rng(20240601, 4);
    for (int i = 0; i < 100; ++i) {
        Draw d = random_draw(rng);
        double best = expected_profit_binding(d.p, d.r, one_shot_share(d.p));
        for (double s = -2.0; s <= 2.0; s += 0.01)
            CHECK(best >= expected_profit_binding(d.p, d.r, s) - 1e-12);
    }
}

TEST_CASE("property: no contract is neutral for any offer terms") {
    PathRng rng(20240601, 5);
    for (int i = 0; i < 200; ++i) {
        Draw d = random_draw(rng);
        Contract k{false, d.s, d.f};
        RoundOutcome out = realize_round(d.p, WorkerState{d.r}, k, rng.next_normal());
        CHECK(out.z == 0.0);
        CHECK(out.x == 0.0);
        CHECK(out.w == 0.0);
        CHECK(out.v == 0.0);
        CHECK(out.pi == 0.0);
        CHECK(out.r_next == doctest::Approx(d.p.beta * d.r));
        CHECK(expected_utility(d.p, k, 1.23) == 0.0);
    }
}

TEST_CASE("property: reference update is a convex combination") {
    PathRng rng(20240601, 6);
    for (int i = 0; i < 500; ++i) {
        Draw d = random_draw(rng);
        double v = -2.0 + 4.0 * rng.next_unit();
        double updated = reference_update(d.p, d.r, v, true);
        CHECK(updated >= std::min(d.r, v) - 1e-12);
        CHECK(updated <= std::max(d.r, v) + 1e-12);
    }
}
