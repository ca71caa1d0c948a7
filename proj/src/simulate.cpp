#include "gig/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "gig/deterministic.hpp"
#include "gig/random.hpp"

namespace gig {

namespace {

void validate_table(const PolicyTable& table) {
    if (table.grid.points < 2 || !(table.grid.r_min < table.grid.r_max))
        throw PolicyRangeError("tabulated policy has a degenerate grid");
    if (table.chi.size() != table.grid.points || table.s.size() != table.grid.points)
        throw PolicyRangeError("tabulated policy arrays do not match the grid size");
    if (!table.s.isFinite().all())
        throw PolicyRangeError("tabulated policy contains non-finite shares");
}

PolicyDecision tabulated_decision(const PolicyTable& table, double r) {
    const GridSpec& g = table.grid;
    double h = g.spacing();
    // clamping rule: references beyond the grid take the boundary decision
    double pos = std::clamp((r - g.r_min) / h, 0.0, static_cast<double>(g.points - 1));
    Eigen::Index lo = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)),
                                               0, g.points - 2);
    double t = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    Eigen::Index nearest = (t < 0.5) ? lo : lo + 1;

    if (!table.chi[nearest]) return {false, 0.0};
    // interpolate the share only between two contracting nodes; across the
    // contract boundary hold the nearest contracting node's share
    if (table.chi[lo] && table.chi[lo + 1])
        return {true, (1.0 - t) * table.s[lo] + t * table.s[lo + 1]};
    return {true, table.s[nearest]};
}

struct PathAccum {
    double sum_pi = 0.0;
    double sum_v = 0.0;
    double sum_v_contract = 0.0;
    double discounted = 0.0;
    double r_final = 0.0;
    std::int64_t n_contract = 0;
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    if (xs.empty()) return out;
    // identical samples (the deterministic limit) have exactly zero variance
    bool all_equal = true;
    for (double x : xs)
        if (x != xs.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) {
        out.mean = xs.front();
        return out;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
                 std::sqrt(static_cast<double>(xs.size()));
    }
    return out;
}

}  // namespace

PolicyDecision policy_decision(const ModelParams& p, const EmployerPolicy& policy, double r) {
    if (policy.kind == EmployerPolicy::Kind::closed_form) {
        return {r <= threshold(p), 1.0};
    }
    if (!policy.table) throw PolicyRangeError("tabulated policy requires a table");
    return tabulated_decision(*policy.table, r);
}

SimulationSummary simulate(const ModelParams& p, const EmployerPolicy& policy,
                           const SimulationConfig& cfg, const RoundObserver& observer) {
    validate(p);
    if (cfg.rounds < 1) throw DomainError("rounds", "rounds must be >= 1");
    if (cfg.paths < 1) throw DomainError("paths", "paths must be >= 1");
    if (cfg.threads < 1) throw DomainError("threads", "threads must be >= 1");
    if (cfg.burn_in < 0 || cfg.burn_in >= cfg.rounds)
        throw DomainError("burn_in", "burn_in must lie in [0, rounds)");
    if (cfg.forced_share && !std::isfinite(*cfg.forced_share))
        throw DomainError("forced_share", "forced_share must be finite");
    if (policy.kind == EmployerPolicy::Kind::tabulated) {
        if (!policy.table) throw PolicyRangeError("tabulated policy requires a table");
        validate_table(*policy.table);
    }

    std::vector<PathAccum> accum(static_cast<std::size_t>(cfg.paths));

    auto run_path = [&](int path) {
        PathAccum acc;
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(path));
        double r = cfg.r0;
        double disc = 1.0;  // delta^t
        for (int t = 0; t < cfg.rounds; ++t) {
            PolicyDecision d = cfg.forced_share ? PolicyDecision{true, *cfg.forced_share}
                                                : policy_decision(p, policy, r);
            Contract k = d.chi ? Contract::offer(d.s, binding_fix(p, r, d.s))
                               : Contract::none();
            double eps = p.sigma * rng.next_normal();
            RoundOutcome out = realize_round(p, WorkerState{r}, k, eps);
            if (observer) observer(RoundRecord{path, t, r, k, out});

            if (t >= cfg.burn_in) {
                acc.sum_pi += out.pi;
                acc.sum_v += out.v;
                if (d.chi) {
                    acc.sum_v_contract += out.v;
                    ++acc.n_contract;
                }
            }
            acc.discounted += disc * out.pi;
            disc *= p.delta;
            r = cfg.pin_reference ? cfg.r0 : out.r_next;
        }
        acc.discounted *= (1.0 - p.delta);
        acc.r_final = r;
        accum[static_cast<std::size_t>(path)] = acc;
    };

    if (observer || cfg.threads == 1) {
        for (int path = 0; path < cfg.paths; ++path) run_path(path);
    } else {
        int n_threads = std::min(cfg.threads, cfg.paths);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w) {
            int lo = static_cast<int>(static_cast<std::int64_t>(cfg.paths) * w / n_threads);
            int hi = static_cast<int>(static_cast<std::int64_t>(cfg.paths) * (w + 1) / n_threads);
            workers.emplace_back([&run_path, lo, hi] {
                for (int path = lo; path < hi; ++path) run_path(path);
            });
        }
        for (auto& worker : workers) worker.join();
    }

    // deterministic reduction in path order
    int counted_rounds = cfg.rounds - cfg.burn_in;
    std::vector<double> pi_means, v_means, v_contract_means, discounted, finals;
    pi_means.reserve(accum.size());
    v_means.reserve(accum.size());
    discounted.reserve(accum.size());
    finals.reserve(accum.size());
    std::int64_t total_contract = 0;
    for (const PathAccum& acc : accum) {
        pi_means.push_back(acc.sum_pi / counted_rounds);
        v_means.push_back(acc.sum_v / counted_rounds);
        if (acc.n_contract > 0)
            v_contract_means.push_back(acc.sum_v_contract / static_cast<double>(acc.n_contract));
        discounted.push_back(acc.discounted);
        finals.push_back(acc.r_final);
        total_contract += acc.n_contract;
    }

    SimulationSummary summary;
    summary.paths = cfg.paths;
    summary.rounds = cfg.rounds;
    summary.contracted_rounds = total_contract;
    summary.employment_rate = static_cast<double>(total_contract) /
                              (static_cast<double>(cfg.paths) * counted_rounds);

    MeanSe m = mean_se(pi_means);
    summary.profit_per_round = {m.mean, m.se};
    m = mean_se(v_means);
    summary.net_wage_per_round = {m.mean, m.se};
    m = mean_se(v_contract_means);
    summary.net_wage_given_contract = {m.mean, m.se};
    m = mean_se(discounted);
    summary.discounted_profit = {m.mean, m.se};

    MeanSe fin = mean_se(finals);
    summary.final_reference.mean = fin.mean;
    summary.final_reference.stdev = fin.se * std::sqrt(static_cast<double>(finals.size()));
    summary.final_reference.min = *std::min_element(finals.begin(), finals.end());
    summary.final_reference.max = *std::max_element(finals.begin(), finals.end());
    return summary;
}

double drift_check(const ModelParams& p, double s) {
    validate(p);
    return (1.0 - p.beta) * p.gamma * s * s * p.sigma * p.sigma / 2.0;
}

}  // namespace gig
