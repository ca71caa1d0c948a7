#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "gig/grid.hpp"
#include "gig/model.hpp"

namespace gig {

// Employer decision rule, queried on the worker's pre-round reference only.
// closed_form applies the noise-free threshold rule (contract iff r <= R_bar,
// full share); tabulated evaluates a solved PolicyTable.
struct EmployerPolicy {
    enum class Kind { closed_form, tabulated };

    Kind kind = Kind::closed_form;
    std::optional<PolicyTable> table;

    static EmployerPolicy closed_form() { return {}; }
    static EmployerPolicy tabulated(PolicyTable t) {
        return {Kind::tabulated, std::move(t)};
    }
};

struct PolicyDecision {
    bool chi;
    double s;
};

// The (chi, s) pair the policy prescribes at reference r. Tabulated policies
// clamp r onto their grid; chi comes from the nearest node and s is
// interpolated between contracting nodes. Throws PolicyRangeError when a
// tabulated policy is missing or unusable.
PolicyDecision policy_decision(const ModelParams& p, const EmployerPolicy& policy, double r);

struct SimulationConfig {
    double r0 = 0.0;
    int rounds = 20;
    int paths = 10000;
    std::uint64_t seed = 42;

    int burn_in = 0;                        // rounds excluded from per-round statistics
    bool pin_reference = false;             // hold the reference at r0 (diagnostic runs)
    std::optional<double> forced_share{};   // contract every round with this share
    int threads = 1;                        // path-level parallelism; results are
                                            // identical for any thread count
};

struct Stat {
    double mean = 0.0;
    double se = 0.0;  // sample stdev across paths / sqrt(paths)
};

struct ReferenceStats {
    double mean = 0.0;
    double stdev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct SimulationSummary {
    Stat profit_per_round;
    Stat net_wage_per_round;
    double employment_rate = 0.0;  // contracted fraction of all (path, round) pairs
    Stat net_wage_given_contract;  // across paths that contracted at least once
    Stat discounted_profit;        // per-path (1 - delta) sum_t delta^t pi_t
    ReferenceStats final_reference;
    std::int64_t contracted_rounds = 0;
    int paths = 0;
    int rounds = 0;
};

// One realized round handed to an optional observer. Observed runs execute
// single-threaded in (path, t) order.
struct RoundRecord {
    int path;
    int t;
    double r;  // pre-round reference
    Contract contract;
    RoundOutcome outcome;
};
using RoundObserver = std::function<void(const RoundRecord&)>;

// Seeded Monte Carlo forward play of the round protocol under the given
// policy. Per round: query the policy at r, attach the binding fix when a
// contract is struck, draw eps ~ N(0, sigma^2), realize the round and advance
// the reference. Identical (params, policy, config) give bit-identical
// summaries across runs and thread counts.
SimulationSummary simulate(const ModelParams& p, const EmployerPolicy& policy,
                           const SimulationConfig& cfg, const RoundObserver& observer = {});

// Expected per-round reference drift over contracted rounds:
//   (1 - beta) gamma s^2 sigma^2 / 2.
double drift_check(const ModelParams& p, double s);

}  // namespace gig
