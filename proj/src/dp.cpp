#include "gig/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gig/model.hpp"
#include "gig/optimize.hpp"

namespace gig {

namespace {

constexpr double kShareMax = 2.0;
constexpr int kCoarseShares = 65;
constexpr double kShareTol = 1e-8;
constexpr double kMonotoneSlack = 1e-10;
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

// Nodes of an n-point Gauss-Hermite rule for N(0, sigma^2) lie within
// +-sigma sqrt(4n + 2); beyond +-8.5 sigma the remaining Gaussian mass is
// below double precision, so wider requests are capped there.
double z_span_for(int quad_nodes) {
    return std::min(8.5, std::sqrt(4.0 * quad_nodes + 2.0));
}

void check_quad_nodes(const ModelParams& p, int quad_nodes) {
    if (quad_nodes < 1)
        throw QuadratureError("quad_nodes must be >= 1, got " + std::to_string(quad_nodes));
    if (p.sigma > 0.0 && quad_nodes < 7)
        throw QuadratureError("quad_nodes must be >= 7 when sigma > 0, got " +
                              std::to_string(quad_nodes));
}

// E[ Vhat(m + w Z) ], Z ~ N(0,1), for the clamped piecewise-linear
// interpolant Vhat: exact per-cell Gaussian integrals over the +-z_span
// window, window-edge values carrying the tail mass. On each segment with
// endpoint values (v_l, v_u),
//   int_l^u (v_l + slope (y - l)) dPhi = v_l dPhi + slope ((m - l) dPhi - w dphi).
double expect_pwlinear(const GridSpec& g, const Eigen::ArrayXd& v, double m, double w,
                       double z_span) {
    if (w == 0.0) return interp(g, v, m);

    const double h = g.spacing();
    const double lo = m - z_span * w;
    const double hi = m + z_span * w;
    const double tail = norm_cdf(-z_span);
    double acc = tail * (interp(g, v, lo) + interp(g, v, hi));

    // interior breakpoints: grid nodes strictly inside (lo, hi), clipped to the
    // grid (the interpolant is flat and kink-free beyond it)
    Eigen::Index first = static_cast<Eigen::Index>(std::floor((lo - g.r_min) / h)) + 1;
    Eigen::Index last = static_cast<Eigen::Index>(std::ceil((hi - g.r_min) / h)) - 1;
    first = std::max<Eigen::Index>(first, 0);
    last = std::min<Eigen::Index>(last, g.points - 1);

    double prev_y = lo;
    double prev_v = interp(g, v, lo);
    double prev_cdf = tail;
    double prev_pdf = norm_pdf(-z_span);
    auto advance = [&](double y, double value, double xi) {
        double cdf = norm_cdf(xi);
        double pdf = norm_pdf(xi);
        double len = y - prev_y;
        if (len > 0.0) {
            double d_cdf = cdf - prev_cdf;
            double slope = (value - prev_v) / len;
            acc += prev_v * d_cdf + slope * ((m - prev_y) * d_cdf - w * (pdf - prev_pdf));
        }
        prev_y = y;
        prev_v = value;
        prev_cdf = cdf;
        prev_pdf = pdf;
    };

    for (Eigen::Index i = first; i <= last; ++i) {
        double y = g.r_min + static_cast<double>(i) * h;
        if (y <= lo || y >= hi) continue;
        advance(y, v[i], (y - m) / w);
    }
    advance(hi, interp(g, v, hi), z_span);
    return acc;
}

// The same expectation recast as offset weights against the node values:
// shifting the evaluation point by whole cells shifts the breakpoint pattern
// rigidly, so for every node j,
//   E[ Vhat(y_j + drift + w Z) ] = sum_k W[k] v[clip(j + k_lo + k)].
// Index clipping reproduces the clamped interpolant exactly because the
// per-segment weights applied to equal endpoint values integrate a constant.
struct ExpectationStencil {
    Eigen::Index k_lo = 0;
    std::vector<double> w;
};

ExpectationStencil expectation_stencil(double h, double drift, double width, double z_span) {
    ExpectationStencil st;
    if (width == 0.0) {
        // width 0 only occurs with zero drift (sigma = 0 or s = 0)
        st.k_lo = 0;
        st.w = {1.0};
        return st;
    }

    const double lo = drift - z_span * width;
    const double hi = drift + z_span * width;
    const auto k_first = static_cast<Eigen::Index>(std::floor(lo / h)) + 1;
    const auto k_last = static_cast<Eigen::Index>(std::ceil(hi / h)) - 1;

    st.k_lo = k_first - 1;
    st.w.assign(static_cast<std::size_t>(k_last + 1 - st.k_lo + 1), 0.0);
    auto add = [&](Eigen::Index k, double weight) {
        st.w[static_cast<std::size_t>(k - st.k_lo)] += weight;
    };
    // a breakpoint's value is a convex combination of its two neighboring nodes
    auto add_point = [&](Eigen::Index k, double frac, double weight) {
        add(k, (1.0 - frac) * weight);
        if (frac > 0.0) add(k + 1, frac * weight);
    };

    const double tail = norm_cdf(-z_span);
    const double frac_lo = lo / h - static_cast<double>(k_first - 1);
    const double frac_hi = hi / h - static_cast<double>(k_last);
    add_point(k_first - 1, frac_lo, tail);
    add_point(k_last, frac_hi, tail);

    double prev_xi = -z_span;
    double prev_cdf = tail;
    double prev_pdf = norm_pdf(-z_span);
    Eigen::Index prev_k = k_first - 1;
    double prev_frac = frac_lo;
    auto advance = [&](double xi, Eigen::Index k, double frac) {
        double cdf = norm_cdf(xi);
        double pdf = norm_pdf(xi);
        double len = xi - prev_xi;
        if (len > 0.0) {
            double d_cdf = cdf - prev_cdf;
            double gain = (-prev_xi * d_cdf - (pdf - prev_pdf)) / len;
            add_point(prev_k, prev_frac, d_cdf - gain);
            add_point(k, frac, gain);
        }
        prev_xi = xi;
        prev_cdf = cdf;
        prev_pdf = pdf;
        prev_k = k;
        prev_frac = frac;
    };

    for (Eigen::Index k = k_first; k <= k_last; ++k) {
        double xi = (static_cast<double>(k) * h - drift) / width;
        if (xi <= -z_span || xi >= z_span) continue;
        advance(xi, k, 0.0);
    }
    advance(z_span, k_last, frac_hi);
    return st;
}

double apply_stencil(const Eigen::ArrayXd& v, Eigen::Index j, const ExpectationStencil& st) {
    const Eigen::Index n = v.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < st.w.size(); ++i) {
        Eigen::Index k = std::clamp<Eigen::Index>(j + st.k_lo + static_cast<Eigen::Index>(i),
                                                  0, n - 1);
        acc += st.w[i] * v[k];
    }
    return acc;
}

struct NodeEval {
    double value;
    double contract_value;
    double no_contract_value;
    double s;
    bool boundary_hit;
};

// Full-fidelity backup at one reference: coarse share scan plus golden-section
// refinement of the bracketing interval.
NodeEval backup_node(const ModelParams& p, const GridSpec& grid, const Eigen::ArrayXd& v,
                     double r, double z_span) {
    const double no_contract = p.delta * interp(grid, v, p.beta * r);

    auto objective = [&](double s) {
        double width = (1.0 - p.beta) * std::abs(s) * p.sigma;
        double drift = (1.0 - p.beta) * p.gamma * s * s * p.sigma * p.sigma / 2.0;
        double cont = expect_pwlinear(grid, v, r + drift, width, z_span);
        return (1.0 - p.delta) * expected_profit_binding(p, r, s) + p.delta * cont;
    };

    const double step = kShareMax / (kCoarseShares - 1);
    int best = 0;
    double best_value = objective(0.0);
    for (int i = 1; i < kCoarseShares; ++i) {
        double value = objective(i * step);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    double s_star = golden_section_maximize(objective, std::max(0.0, (best - 1) * step),
                                            std::min(kShareMax, (best + 1) * step), kShareTol);
    double contract = objective(s_star);
    if (contract < best_value) {  // keep the coarse winner if refinement drifted off
        contract = best_value;
        s_star = best * step;
    }

    NodeEval out{};
    out.contract_value = contract;
    out.no_contract_value = no_contract;
    out.value = std::max(contract, no_contract);
    bool chi = contract >= no_contract;  // tie resolves in favor of contracting
    out.s = chi ? s_star : 0.0;
    out.boundary_hit = chi && (s_star < 1e-6 || s_star > kShareMax - 1e-6);
    return out;
}

bool nonincreasing(const Eigen::ArrayXd& values) {
    for (Eigen::Index i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] + kMonotoneSlack) return false;
    return true;
}

}  // namespace

ValueTable bellman_backup(const ModelParams& p, const ValueTable& v, int quad_nodes) {
    validate(p);
    v.grid.validate();
    check_quad_nodes(p, quad_nodes);
    const double z_span = z_span_for(quad_nodes);

    Eigen::ArrayXd nodes = v.grid.nodes();
    ValueTable out{v.grid, Eigen::ArrayXd(nodes.size())};
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
        out.values[i] = backup_node(p, v.grid, v.values, nodes[i], z_span).value;
    return out;
}

SolveResult solve(const ModelParams& p, const GridSpec& grid, double tol, int max_iter,
                  int quad_nodes) {
    validate(p);
    grid.validate();
    check_quad_nodes(p, quad_nodes);
    if (!(tol > 0.0)) throw DomainError("tol", "tol must be positive");
    if (max_iter < 1) throw DomainError("max_iter", "max_iter must be >= 1");

    const double z_span = z_span_for(quad_nodes);
    const double h = grid.spacing();
    const Eigen::ArrayXd nodes = grid.nodes();
    const Eigen::Index n = grid.points;

    // Per coarse share: one-step profit pieces and the expectation stencil.
    // Stencils depend only on the grid spacing, so they are built once.
    const double step = kShareMax / (kCoarseShares - 1);
    std::vector<ExpectationStencil> stencils;
    std::vector<double> base_profit(kCoarseShares);
    stencils.reserve(kCoarseShares);
    for (int i = 0; i < kCoarseShares; ++i) {
        double s = i * step;
        double width = (1.0 - p.beta) * s * p.sigma;
        double drift = (1.0 - p.beta) * p.gamma * s * s * p.sigma * p.sigma / 2.0;
        stencils.push_back(expectation_stencil(h, drift, width, z_span));
        base_profit[i] = (1.0 - p.delta) * (s / p.c - s * s * (1.0 / (2.0 * p.c) +
                                                              p.gamma * p.sigma * p.sigma / 2.0));
    }

    ValueTable v{grid, Eigen::ArrayXd::Zero(n)};
    SolverReport report;

    constexpr int kRatioBurnIn = 5;
    double prev_delta = 0.0;

    // Jacobi sweeps: each iterate is computed from the immutable previous one.
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::ArrayXd contract = Eigen::ArrayXd::Constant(
            n, -std::numeric_limits<double>::infinity());
        for (int i = 0; i < kCoarseShares; ++i) {
            const ExpectationStencil& st = stencils[i];
            for (Eigen::Index j = 0; j < n; ++j) {
                double value = base_profit[i] + p.delta * apply_stencil(v.values, j, st);
                if (value > contract[j]) contract[j] = value;
            }
        }
        Eigen::ArrayXd next(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            double no_contract = p.delta * interp(grid, v.values, p.beta * nodes[j]);
            next[j] = std::max(contract[j] - (1.0 - p.delta) * nodes[j], no_contract);
        }

        double delta = (next - v.values).abs().maxCoeff();
        report.iterations = iter + 1;
        report.final_sup_norm_delta = delta;
        v.values = next;
        if (!nonincreasing(v.values)) report.monotone_ok = false;
        if (iter >= kRatioBurnIn && prev_delta > 1e-300)
            report.max_delta_ratio = std::max(report.max_delta_ratio, delta / prev_delta);
        prev_delta = delta;
        if (delta <= tol) {
            report.converged = true;
            break;
        }
    }

    // Greedy policy with refined shares, and branch values for the threshold.
    PolicyTable policy{grid, Eigen::Array<bool, Eigen::Dynamic, 1>(n), Eigen::ArrayXd(n)};
    Eigen::ArrayXd branch_gap(n);  // contract minus no-contract value
    for (Eigen::Index j = 0; j < n; ++j) {
        NodeEval eval = backup_node(p, grid, v.values, nodes[j], z_span);
        policy.chi[j] = eval.contract_value >= eval.no_contract_value;
        policy.s[j] = eval.s;
        branch_gap[j] = eval.contract_value - eval.no_contract_value;
        if (eval.boundary_hit) report.share_boundary_hit = true;
    }

    // Threshold structure: a contract prefix followed by a no-contract suffix
    // (all-contract and all-no-contract count as degenerate threshold rules).
    int crossings = 0;
    Eigen::Index cross_at = -1;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        if (policy.chi[j] != policy.chi[j + 1]) {
            ++crossings;
            cross_at = j;
        }
    }
    report.threshold_structure_ok =
        (crossings == 0) || (crossings == 1 && policy.chi[0] && !policy.chi[n - 1]);
    if (report.threshold_structure_ok && crossings == 1) {
        // refine by the zero of the branch gap between the boundary nodes
        double g0 = branch_gap[cross_at];
        double g1 = branch_gap[cross_at + 1];
        double t = (g0 != g1) ? g0 / (g0 - g1) : 0.5;
        report.threshold_estimate = nodes[cross_at] + std::clamp(t, 0.0, 1.0) * h;
    }

    return SolveResult{std::move(v), std::move(policy), report};
}

double policy_value_check(const ModelParams& p, const PolicyTable& policy, double r0,
                          const SimulationConfig& sim_config) {
    SimulationConfig cfg = sim_config;
    cfg.r0 = r0;
    SimulationSummary summary = simulate(p, EmployerPolicy::tabulated(policy), cfg);
    return summary.discounted_profit.mean;
}

}  // namespace gig
