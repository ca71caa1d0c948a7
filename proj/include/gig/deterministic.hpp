#pragma once

#include <vector>

#include <Eigen/Core>

#include "gig/params.hpp"

namespace gig {

// Closed-form solution of the noise-free (sigma = 0) control problem.
struct DeterministicSolution {
    double r_bar;           // contract/no-contract threshold on the reference
    double v_at_r_bar;      // steady profit per round at the threshold
    double net_production;  // 1/(2c), output net of effort cost at s = 1
    double ratio;           // v_at_r_bar / r_bar = delta (1 - beta) / (1 - delta)
};

// One round of the deterministic threshold play. Contract rows keep the
// reference constant; no-contract rows decay it by beta.
struct TrajectoryRow {
    int t = 0;
    double r = 0.0;
    bool chi = false;
    double s = 0.0;
    double f = 0.0;
    double z = 0.0;
    double v = 0.0;
    double pi = 0.0;
};

// threshold / steady_profit evaluated per beta; rows satisfy
// r_bar + v_at_r_bar = 1/(2c) identically.
struct BananaTable {
    Eigen::ArrayXd beta;
    Eigen::ArrayXd r_bar;
    Eigen::ArrayXd v_at_r_bar;
};

// Output net of effort cost at full share, 1/(2c).
double net_production(const ModelParams& p);

// R_bar = 1/(2c) * (1 - delta) / (1 - delta beta). sigma is ignored.
double threshold(const ModelParams& p);

// V(R_bar) = 1/(2c) * delta (1 - beta) / (1 - delta beta).
double steady_profit(const ModelParams& p);

DeterministicSolution deterministic_solution(const ModelParams& p);

// Employer lifetime average profit per round from reference r:
//   r <= R_bar : 1/(2c) - r                      (perpetual contract)
//   r >  R_bar : delta^k (1/(2c) - beta^k r),    k = min{k >= 1 : beta^k r <= R_bar}
// The two branches agree at r = R_bar.
double value_function(const ModelParams& p, double r);

// Forward play of the threshold rule for `rounds` rounds from r0, with s = 1
// and the binding fix. Once a contract is struck every later row repeats it.
std::vector<TrajectoryRow> trajectory(const ModelParams& p, double r0, int rounds);

// Threshold and steady profit across a beta grid at fixed c and delta.
// Throws DomainError on any beta outside (0, 1).
BananaTable banana_curve(double c, double delta, const Eigen::ArrayXd& beta_grid);

}  // namespace gig
