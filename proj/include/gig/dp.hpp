#pragma once

#include <optional>

#include "gig/grid.hpp"
#include "gig/params.hpp"
#include "gig/simulate.hpp"

namespace gig {

struct SolverReport {
    int iterations = 0;
    double final_sup_norm_delta = 0.0;
    std::optional<double> threshold_estimate{};
    bool threshold_structure_ok = false;  // chi is contract-below / no-contract-above
    bool converged = false;
    bool monotone_ok = true;           // every iterate nonincreasing in r
    bool share_boundary_hit = false;   // inner maximizer pinned at the share search bound
    double max_delta_ratio = 0.0;      // max successive sup-norm delta ratio past burn-in
};

struct SolveResult {
    ValueTable value;
    PolicyTable policy;
    SolverReport report;
};

// One Bellman backup of the employer's average-profit-per-round problem:
//   T(V)(R) = max( delta V(beta R),
//                  max_s (1-delta)(s/c - s^2(1/(2c) + gamma sigma^2/2) - R)
//                        + delta E_eps V(R + (1-beta)(s eps + gamma s^2 sigma^2/2)) )
// Off-grid V is linearly interpolated with clamped extrapolation, and the
// expectation over eps ~ N(0, sigma^2) is evaluated in closed form for that
// interpolant (per-cell Gaussian integrals). The integration window matches
// the span of a quad_nodes-point Gauss-Hermite rule, +-sigma sqrt(4n + 2);
// mass beyond it sits on the window-edge values. The inner maximization scans
// 65 shares on [0, 2] and refines the bracket by golden section to 1e-8.
// Ties pick the contract branch. quad_nodes must be >= 1, and >= 7 whenever
// sigma > 0 (QuadratureError otherwise).
ValueTable bellman_backup(const ModelParams& p, const ValueTable& v, int quad_nodes);

// Value iteration from V = 0 until the sup-norm change drops to tol or
// max_iter is reached (Jacobi sweeps; non-convergence is reported, not
// thrown). Sweeps maximize over the coarse share grid; the golden-section
// refinement runs in the final policy-extraction pass, where the share
// precision matters. Reports whether the extracted chi has single-crossing
// (threshold) structure and, if so, where the branch values cross.
SolveResult solve(const ModelParams& p, const GridSpec& grid, double tol, int max_iter,
                  int quad_nodes);

// Monte Carlo estimate of the discounted average profit (1-delta) sum delta^t pi_t
// realized by the tabulated policy from r0; cross-validates the value table.
double policy_value_check(const ModelParams& p, const PolicyTable& policy, double r0,
                          const SimulationConfig& sim_config);

}  // namespace gig
