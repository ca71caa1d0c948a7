#pragma once

#include <string>

#include <json.hpp>

#include "gig/deterministic.hpp"
#include "gig/dp.hpp"
#include "gig/params.hpp"
#include "gig/simulate.hpp"

namespace gig {

// Locale-independent formatting with 12 significant digits (CSV output).
std::string fmt12(double x);

// Solver settings echoed into the policy file.
struct SolverSettings {
    double tol = 1e-9;
    int max_iter = 2000;
    int quad_nodes = 15;
};

nlohmann::ordered_json params_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::ordered_json grid_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);

nlohmann::ordered_json report_json(const SolverReport& r);

nlohmann::ordered_json solution_json(const DeterministicSolution& s);

nlohmann::ordered_json summary_json(const SimulationSummary& s);

// Policy/value file written by `solve-dp` and read back by `simulate`.
struct PolicyFile {
    ModelParams params{};
    ValueTable value;
    PolicyTable policy;
    SolverReport report;
    SolverSettings settings;
};

nlohmann::ordered_json policy_file_json(const ModelParams& p, const SolveResult& result,
                                        const SolverSettings& settings);
void write_policy_file(const std::string& path, const ModelParams& p, const SolveResult& result,
                       const SolverSettings& settings);
PolicyFile read_policy_file(const std::string& path);

}  // namespace gig
