#include "gig/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace gig {

namespace {

constexpr const char* kPolicyFormat = "gig-policy";
constexpr int kPolicyVersion = 1;

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known) throw DomainError(it.key(), "unknown key \"" + it.key() + "\" in " + where);
    }
}

nlohmann::ordered_json stat_json(const Stat& s) {
    return {{"mean", s.mean}, {"se", s.se}};
}

}  // namespace

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

nlohmann::ordered_json params_json(const ModelParams& p) {
    return {{"c", p.c}, {"gamma", p.gamma}, {"beta", p.beta}, {"delta", p.delta},
            {"sigma", p.sigma}};
}

ModelParams params_from_json(const nlohmann::json& j) {
    require_keys(j, {"c", "gamma", "beta", "delta", "sigma"}, "params");
    double c = j.value("c", 1.0);
    double gamma = j.value("gamma", 1.0);
    double beta = j.value("beta", 0.8);
    double delta = j.value("delta", 0.8);
    double sigma = j.value("sigma", 0.0);
    return validate_params(c, gamma, beta, delta, sigma);
}

nlohmann::ordered_json grid_json(const GridSpec& g) {
    return {{"r_min", g.r_min}, {"r_max", g.r_max}, {"points", g.points}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
    require_keys(j, {"r_min", "r_max", "points"}, "grid");
    GridSpec g;
    g.r_min = j.at("r_min").get<double>();
    g.r_max = j.at("r_max").get<double>();
    g.points = j.at("points").get<int>();
    g.validate();
    return g;
}

nlohmann::ordered_json report_json(const SolverReport& r) {
    nlohmann::ordered_json j{{"iterations", r.iterations},
                             {"final_sup_norm_delta", r.final_sup_norm_delta},
                             {"converged", r.converged},
                             {"threshold_structure_ok", r.threshold_structure_ok},
                             {"monotone_ok", r.monotone_ok},
                             {"share_boundary_hit", r.share_boundary_hit}};
    if (r.threshold_estimate)
        j["threshold_estimate"] = *r.threshold_estimate;
    else
        j["threshold_estimate"] = nullptr;
    return j;
}

nlohmann::ordered_json solution_json(const DeterministicSolution& s) {
    return {{"r_bar", s.r_bar},
            {"v_at_r_bar", s.v_at_r_bar},
            {"net_production", s.net_production},
            {"ratio", s.ratio}};
}

nlohmann::ordered_json summary_json(const SimulationSummary& s) {
    return {{"paths", s.paths},
            {"rounds", s.rounds},
            {"employment_rate", s.employment_rate},
            {"contracted_rounds", s.contracted_rounds},
            {"mean_profit_per_round", stat_json(s.profit_per_round)},
            {"mean_net_wage_per_round", stat_json(s.net_wage_per_round)},
            {"mean_net_wage_given_contract", stat_json(s.net_wage_given_contract)},
            {"mean_discounted_profit", stat_json(s.discounted_profit)},
            {"final_reference",
             {{"mean", s.final_reference.mean},
              {"stdev", s.final_reference.stdev},
              {"min", s.final_reference.min},
              {"max", s.final_reference.max}}}};
}

nlohmann::ordered_json policy_file_json(const ModelParams& p, const SolveResult& result,
                                        const SolverSettings& settings) {
    std::vector<double> values(result.value.values.begin(), result.value.values.end());
    std::vector<bool> chi(result.policy.chi.begin(), result.policy.chi.end());
    std::vector<double> s(result.policy.s.begin(), result.policy.s.end());

    nlohmann::ordered_json solver = report_json(result.report);
    solver["tol"] = settings.tol;
    solver["max_iter"] = settings.max_iter;
    solver["quad_nodes"] = settings.quad_nodes;

    return {{"format", kPolicyFormat}, {"version", kPolicyVersion},
            {"params", params_json(p)}, {"grid", grid_json(result.value.grid)},
            {"values", values},         {"chi", chi},
            {"s", s},                   {"solver", solver}};
}

void write_policy_file(const std::string& path, const ModelParams& p, const SolveResult& result,
                       const SolverSettings& settings) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << policy_file_json(p, result, settings).dump(2) << "\n";
}

PolicyFile read_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    if (j.value("format", "") != kPolicyFormat || j.value("version", 0) != kPolicyVersion)
        throw std::runtime_error(path + " is not a gig-policy v1 file");

    PolicyFile file;
    file.params = params_from_json(j.at("params"));
    GridSpec grid = grid_from_json(j.at("grid"));

    auto values = j.at("values").get<std::vector<double>>();
    auto chi = j.at("chi").get<std::vector<bool>>();
    auto s = j.at("s").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != grid.points ||
        static_cast<int>(chi.size()) != grid.points ||
        static_cast<int>(s.size()) != grid.points)
        throw std::runtime_error(path + ": array lengths do not match grid points");

    file.value.grid = grid;
    file.value.values = Eigen::Map<const Eigen::ArrayXd>(values.data(), grid.points);
    file.policy.grid = grid;
    file.policy.chi.resize(grid.points);
    for (int i = 0; i < grid.points; ++i) file.policy.chi[i] = chi[static_cast<std::size_t>(i)];
    file.policy.s = Eigen::Map<const Eigen::ArrayXd>(s.data(), grid.points);

    const nlohmann::json& solver = j.at("solver");
    file.report.iterations = solver.value("iterations", 0);
    file.report.final_sup_norm_delta = solver.value("final_sup_norm_delta", 0.0);
    file.report.converged = solver.value("converged", false);
    file.report.threshold_structure_ok = solver.value("threshold_structure_ok", false);
    file.report.monotone_ok = solver.value("monotone_ok", true);
    file.report.share_boundary_hit = solver.value("share_boundary_hit", false);
    if (solver.contains("threshold_estimate") && !solver.at("threshold_estimate").is_null())
        file.report.threshold_estimate = solver.at("threshold_estimate").get<double>();
    file.settings.tol = solver.value("tol", 1e-9);
    file.settings.max_iter = solver.value("max_iter", 2000);
    file.settings.quad_nodes = solver.value("quad_nodes", 15);
    return file;
}

}  // namespace gig
