// gigmodel: command-line front end for the gig contract model.
//
// Subcommands: threshold, trajectory, banana, simulate, solve-dp.
// Configuration comes from an optional JSON file (--config) overridden by
// command-line flags. Tabular outputs are CSV (12 significant digits, LF line
// endings); structured outputs are JSON.
//
// Exit codes: 0 success, 2 configuration/domain error, 3 solver
// non-convergence, 4 internal invariant violation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gig/deterministic.hpp"
#include "gig/dp.hpp"
#include "gig/model.hpp"
#include "gig/serialize.hpp"
#include "gig/simulate.hpp"

using nlohmann::json;

namespace {

// A module-level invariant failed on data about to be emitted.
class InternalCheckError : public std::runtime_error {
public:
    explicit InternalCheckError(const std::string& message) : std::runtime_error(message) {}
};

void check(bool ok, const std::string& message) {
    if (!ok) throw InternalCheckError(message);
}

struct Options {
    gig::ModelParams params = gig::validate_params(1.0, 1.0, 0.8, 0.8, 0.0);
    std::set<std::string> explicit_params;

    std::vector<double> r0_list{0.1};
    int rounds = 20;
    int paths = 10000;
    std::uint64_t seed = 42;
    int burn_in = 0;

    std::vector<double> beta_grid;   // empty: 0.01..0.99 step 0.01
    std::vector<double> delta_list;  // empty: {0.7, 0.9}

    std::optional<double> grid_min;
    std::optional<double> grid_max;
    int grid_points = 1201;
    double tol = 1e-9;
    int max_iter = 2000;
    int quad_nodes = 15;

    std::string policy_path;
    std::string round_csv;
    std::string out;
    bool pin_reference = false;
    std::optional<double> forced_share;
};

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            throw gig::DomainError(it.key(), "unknown key \"" + it.key() + "\" in " + where);
    }
}

void apply_config_file(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw gig::DomainError("config", "cannot open config file " + path);
    json cfg = json::parse(in);
    require_keys(cfg,
                 {"params", "r0", "rounds", "paths", "seed", "burn_in", "beta_grid",
                  "delta_list", "grid", "tol", "max_iter", "quad_nodes", "policy",
                  "pin_reference", "forced_share", "round_csv"},
                 "config");

    if (cfg.contains("params")) {
        const json& pj = cfg.at("params");
        o.params = gig::params_from_json(pj);
        for (auto it = pj.begin(); it != pj.end(); ++it) o.explicit_params.insert(it.key());
    }
    if (cfg.contains("r0")) {
        o.r0_list.clear();
        if (cfg.at("r0").is_array())
            o.r0_list = cfg.at("r0").get<std::vector<double>>();
        else
            o.r0_list.push_back(cfg.at("r0").get<double>());
    }
    if (cfg.contains("rounds")) o.rounds = cfg.at("rounds").get<int>();
    if (cfg.contains("paths")) o.paths = cfg.at("paths").get<int>();
    if (cfg.contains("seed")) o.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("burn_in")) o.burn_in = cfg.at("burn_in").get<int>();
    if (cfg.contains("beta_grid")) o.beta_grid = cfg.at("beta_grid").get<std::vector<double>>();
    if (cfg.contains("delta_list"))
        o.delta_list = cfg.at("delta_list").get<std::vector<double>>();
    if (cfg.contains("grid")) {
        const json& gj = cfg.at("grid");
        require_keys(gj, {"r_min", "r_max", "points"}, "grid");
        if (gj.contains("r_min")) o.grid_min = gj.at("r_min").get<double>();
        if (gj.contains("r_max")) o.grid_max = gj.at("r_max").get<double>();
        if (gj.contains("points")) o.grid_points = gj.at("points").get<int>();
    }
    if (cfg.contains("tol")) o.tol = cfg.at("tol").get<double>();
    if (cfg.contains("max_iter")) o.max_iter = cfg.at("max_iter").get<int>();
    if (cfg.contains("quad_nodes")) o.quad_nodes = cfg.at("quad_nodes").get<int>();
    if (cfg.contains("policy")) o.policy_path = cfg.at("policy").get<std::string>();
    if (cfg.contains("pin_reference")) o.pin_reference = cfg.at("pin_reference").get<bool>();
    if (cfg.contains("forced_share")) o.forced_share = cfg.at("forced_share").get<double>();
    if (cfg.contains("round_csv")) o.round_csv = cfg.at("round_csv").get<std::string>();
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << text;
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

constexpr double kEmitTol = 1e-12;

int cmd_threshold(const Options& o) {
    gig::validate(o.params);
    gig::DeterministicSolution sol = gig::deterministic_solution(o.params);

    check(std::abs(sol.r_bar + sol.v_at_r_bar - sol.net_production) <= kEmitTol,
          "threshold identity r_bar + v != 1/(2c)");
    check(std::abs(sol.ratio - o.params.delta * (1.0 - o.params.beta) / (1.0 - o.params.delta)) <=
              kEmitTol,
          "profit/wage ratio mismatch");
    check(sol.r_bar > 0.0 && sol.r_bar < sol.net_production, "threshold outside (0, 1/(2c))");

    write_text(o.out, json_text(gig::solution_json(sol)));
    return 0;
}

int cmd_trajectory(const Options& o) {
    gig::validate(o.params);
    double r_bar = gig::threshold(o.params);
    double np = gig::net_production(o.params);
    bool long_format = o.r0_list.size() > 1;

    std::ostringstream csv;
    if (long_format) csv << "r0,";
    csv << "t,r,chi,s,f,z,v,pi\n";
    for (double r0 : o.r0_list) {
        for (const gig::TrajectoryRow& row : gig::trajectory(o.params, r0, o.rounds)) {
            check(row.chi == (row.r <= r_bar), "trajectory chi disagrees with the threshold");
            if (row.chi)
                check(std::abs(row.v + row.pi - np) <= kEmitTol,
                      "trajectory row violates v + pi = 1/(2c)");
            if (long_format) csv << gig::fmt12(r0) << ",";
            csv << row.t << "," << gig::fmt12(row.r) << "," << (row.chi ? 1 : 0) << ","
                << gig::fmt12(row.s) << "," << gig::fmt12(row.f) << "," << gig::fmt12(row.z)
                << "," << gig::fmt12(row.v) << "," << gig::fmt12(row.pi) << "\n";
        }
    }
    write_text(o.out, csv.str());
    return 0;
}

int cmd_banana(const Options& o) {
    gig::validate(o.params);
    Eigen::ArrayXd betas;
    if (o.beta_grid.empty()) {
        betas = Eigen::ArrayXd::LinSpaced(99, 0.01, 0.99);
    } else {
        betas = Eigen::Map<const Eigen::ArrayXd>(o.beta_grid.data(),
                                                 static_cast<Eigen::Index>(o.beta_grid.size()));
    }
    std::vector<double> deltas =
        o.delta_list.empty() ? std::vector<double>{0.7, 0.9} : o.delta_list;
    double np = 1.0 / (2.0 * o.params.c);

    std::ostringstream csv;
    csv << "delta,beta,r_bar,v_at_r_bar\n";
    for (double delta : deltas) {
        gig::BananaTable table = gig::banana_curve(o.params.c, delta, betas);
        for (Eigen::Index i = 0; i < table.beta.size(); ++i) {
            check(std::abs(table.r_bar[i] + table.v_at_r_bar[i] - np) <= kEmitTol,
                  "banana row violates r_bar + v = 1/(2c)");
            csv << gig::fmt12(delta) << "," << gig::fmt12(table.beta[i]) << ","
                << gig::fmt12(table.r_bar[i]) << "," << gig::fmt12(table.v_at_r_bar[i]) << "\n";
        }
    }
    write_text(o.out, csv.str());
    return 0;
}

int cmd_simulate(const Options& o) {
    if (o.r0_list.size() != 1) throw gig::DomainError("r0", "simulate takes a single r0");

    gig::ModelParams params = o.params;
    gig::EmployerPolicy policy = gig::EmployerPolicy::closed_form();
    if (!o.policy_path.empty()) {
        gig::PolicyFile file = gig::read_policy_file(o.policy_path);
        // the policy was solved for its own parameter set; explicit overrides
        // must agree with it
        auto conflicts = [&](const char* name, double given, double stored) {
            if (o.explicit_params.count(name) && std::abs(given - stored) > 1e-12)
                throw gig::DomainError(name, std::string(name) +
                                                 " conflicts with the policy file value");
        };
        conflicts("c", params.c, file.params.c);
        conflicts("gamma", params.gamma, file.params.gamma);
        conflicts("beta", params.beta, file.params.beta);
        conflicts("delta", params.delta, file.params.delta);
        conflicts("sigma", params.sigma, file.params.sigma);
        params = file.params;
        policy = gig::EmployerPolicy::tabulated(file.policy);
    }
    gig::validate(params);

    gig::SimulationConfig cfg;
    cfg.r0 = o.r0_list.front();
    cfg.rounds = o.rounds;
    cfg.paths = o.paths;
    cfg.seed = o.seed;
    cfg.burn_in = o.burn_in;
    cfg.pin_reference = o.pin_reference;
    cfg.forced_share = o.forced_share;

    gig::SimulationSummary summary;
    if (o.round_csv.empty()) {
        summary = gig::simulate(params, policy, cfg);
    } else {
        std::ostringstream csv;
        csv << "path,t,r,chi,s,f,epsilon,z,x,w,v,pi,r_next\n";
        summary = gig::simulate(params, policy, cfg, [&](const gig::RoundRecord& rec) {
            csv << rec.path << "," << rec.t << "," << gig::fmt12(rec.r) << ","
                << (rec.contract.chi ? 1 : 0) << "," << gig::fmt12(rec.contract.s) << ","
                << gig::fmt12(rec.contract.f) << "," << gig::fmt12(rec.outcome.epsilon) << ","
                << gig::fmt12(rec.outcome.z) << "," << gig::fmt12(rec.outcome.x) << ","
                << gig::fmt12(rec.outcome.w) << "," << gig::fmt12(rec.outcome.v) << ","
                << gig::fmt12(rec.outcome.pi) << "," << gig::fmt12(rec.outcome.r_next) << "\n";
        });
        write_text(o.round_csv, csv.str());
    }

    check(summary.employment_rate >= 0.0 && summary.employment_rate <= 1.0,
          "employment rate outside [0, 1]");
    check(summary.profit_per_round.se >= 0.0 && summary.net_wage_per_round.se >= 0.0 &&
              summary.discounted_profit.se >= 0.0,
          "negative standard error");

    write_text(o.out, json_text(gig::summary_json(summary)));
    return 0;
}

int cmd_solve_dp(const Options& o) {
    gig::validate(o.params);
    if (o.out.empty())
        throw gig::DomainError("out", "solve-dp requires --out for the policy file");

    gig::GridSpec grid = gig::default_grid(o.params, o.grid_points);
    if (o.grid_min) grid.r_min = *o.grid_min;
    if (o.grid_max) grid.r_max = *o.grid_max;
    grid.validate();

    gig::SolveResult result = gig::solve(o.params, grid, o.tol, o.max_iter, o.quad_nodes);

    check(result.value.values.isFinite().all(), "value table contains non-finite entries");
    check(result.report.monotone_ok, "value table is not nonincreasing in r");
    if (result.report.converged)
        check(result.report.final_sup_norm_delta <= o.tol,
              "converged flag with sup-norm delta above tol");

    gig::SolverSettings settings{o.tol, o.max_iter, o.quad_nodes};
    gig::write_policy_file(o.out, o.params, result, settings);
    std::cout << json_text(gig::report_json(result.report));
    return result.report.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic principal-agent gig contract model"};
    app.require_subcommand(1);

    std::string config_path;
    Options opts;

    struct FlagValues {
        double c = 0, gamma = 0, beta = 0, delta = 0, sigma = 0;
        std::vector<double> r0;
        int rounds = 0, paths = 0, burn_in = 0, grid_points = 0, max_iter = 0, quad_nodes = 0;
        std::uint64_t seed = 0;
        double grid_min = 0, grid_max = 0, tol = 0, forced_share = 0;
    } fv;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--out", opts.out, "output file (default: stdout)");
        cmd->add_option("--c", fv.c, "effort cost coefficient");
        cmd->add_option("--gamma", fv.gamma, "risk aversion");
        cmd->add_option("--beta", fv.beta, "reference memory decay");
        cmd->add_option("--delta", fv.delta, "employer discount factor");
        cmd->add_option("--sigma", fv.sigma, "output noise std deviation");
        return cmd;
    };

    CLI::App* threshold_cmd =
        add_common(app.add_subcommand("threshold", "closed-form threshold and steady profit"));

    CLI::App* trajectory_cmd =
        add_common(app.add_subcommand("trajectory", "deterministic reference trajectories"));
    trajectory_cmd->add_option("--r0", fv.r0, "initial reference (repeatable)");
    trajectory_cmd->add_option("--rounds", fv.rounds, "horizon");

    CLI::App* banana_cmd =
        add_common(app.add_subcommand("banana", "feasible wage/profit curves over beta"));

    CLI::App* simulate_cmd =
        add_common(app.add_subcommand("simulate", "seeded Monte Carlo forward simulation"));
    simulate_cmd->add_option("--r0", fv.r0, "initial reference");
    simulate_cmd->add_option("--rounds", fv.rounds, "rounds per path");
    simulate_cmd->add_option("--paths", fv.paths, "number of paths");
    simulate_cmd->add_option("--seed", fv.seed, "master RNG seed");
    simulate_cmd->add_option("--burn-in", fv.burn_in, "rounds dropped from per-round stats");
    simulate_cmd->add_option("--policy", opts.policy_path, "tabulated policy file (solve-dp)");
    simulate_cmd->add_flag("--pin-reference", opts.pin_reference,
                           "hold the reference at r0 (diagnostics)");
    simulate_cmd->add_option("--forced-share", fv.forced_share,
                             "contract every round with this share");
    simulate_cmd->add_option("--round-csv", opts.round_csv, "per-round CSV output path");

    CLI::App* solve_cmd =
        add_common(app.add_subcommand("solve-dp", "value iteration for the stochastic problem"));
    solve_cmd->add_option("--grid-min", fv.grid_min, "reference grid lower bound");
    solve_cmd->add_option("--grid-max", fv.grid_max, "reference grid upper bound");
    solve_cmd->add_option("--grid-points", fv.grid_points, "reference grid nodes");
    solve_cmd->add_option("--tol", fv.tol, "sup-norm convergence tolerance");
    solve_cmd->add_option("--max-iter", fv.max_iter, "iteration cap");
    solve_cmd->add_option("--quad-nodes", fv.quad_nodes, "expectation integration nodes");

    try {
        app.parse(argc, argv);

        CLI::App* cmd = app.get_subcommands().front();
        auto given = [&](const std::string& name) {
            const CLI::Option* opt = cmd->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--config")) apply_config_file(config_path, opts);

        // flags override the config file
        double c = opts.params.c, gamma = opts.params.gamma, beta = opts.params.beta;
        double delta = opts.params.delta, sigma = opts.params.sigma;
        for (const char* name : {"c", "gamma", "beta", "delta", "sigma"}) {
            if (given(std::string("--") + name)) opts.explicit_params.insert(name);
        }
        if (given("--c")) c = fv.c;
        if (given("--gamma")) gamma = fv.gamma;
        if (given("--beta")) beta = fv.beta;
        if (given("--delta")) delta = fv.delta;
        if (given("--sigma")) sigma = fv.sigma;
        opts.params = gig::validate_params(c, gamma, beta, delta, sigma);

        if (given("--r0")) opts.r0_list = fv.r0;
        if (given("--rounds")) opts.rounds = fv.rounds;
        if (given("--paths")) opts.paths = fv.paths;
        if (given("--seed")) opts.seed = fv.seed;
        if (given("--burn-in")) opts.burn_in = fv.burn_in;
        if (given("--forced-share")) opts.forced_share = fv.forced_share;
        if (given("--grid-min")) opts.grid_min = fv.grid_min;
        if (given("--grid-max")) opts.grid_max = fv.grid_max;
        if (given("--grid-points")) opts.grid_points = fv.grid_points;
        if (given("--tol")) opts.tol = fv.tol;
        if (given("--max-iter")) opts.max_iter = fv.max_iter;
        if (given("--quad-nodes")) opts.quad_nodes = fv.quad_nodes;
        // --delta doubles as the single-delta selector for banana curves
        if (cmd == banana_cmd && given("--delta")) opts.delta_list = {fv.delta};

        if (cmd == threshold_cmd) return cmd_threshold(opts);
        if (cmd == trajectory_cmd) return cmd_trajectory(opts);
        if (cmd == banana_cmd) return cmd_banana(opts);
        if (cmd == simulate_cmd) return cmd_simulate(opts);
        if (cmd == solve_cmd) return cmd_solve_dp(opts);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const gig::DomainError& e) {
        std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
        return 2;
    } catch (const gig::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gig::PolicyRangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const InternalCheckError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
