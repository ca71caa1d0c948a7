#include "gig/deterministic.hpp"

#include <cmath>
#include <string>

#include "gig/model.hpp"

namespace gig {

double net_production(const ModelParams& p) {
    return 1.0 / (2.0 * p.c);
}

double threshold(const ModelParams& p) {
    return net_production(p) * (1.0 - p.delta) / (1.0 - p.delta * p.beta);
}

double steady_profit(const ModelParams& p) {
    return net_production(p) * p.delta * (1.0 - p.beta) / (1.0 - p.delta * p.beta);
}

DeterministicSolution deterministic_solution(const ModelParams& p) {
    DeterministicSolution sol{};
    sol.r_bar = threshold(p);
    sol.v_at_r_bar = steady_profit(p);
    sol.net_production = net_production(p);
    sol.ratio = sol.v_at_r_bar / sol.r_bar;
    return sol;
}

double value_function(const ModelParams& p, double r) {
    double r_bar = threshold(p);
    double np = net_production(p);
    if (r <= r_bar) return np - r;

    // Skip k rounds while the reference decays, then contract forever.
    double discount = 1.0;
    double decayed = r;
    do {
        discount *= p.delta;
        decayed *= p.beta;
    } while (decayed > r_bar);
    return discount * (np - decayed);
}

std::vector<TrajectoryRow> trajectory(const ModelParams& p, double r0, int rounds) {
    if (rounds < 1) throw DomainError("rounds", "rounds must be >= 1");

    // The closed form lives at sigma = 0 regardless of the supplied noise level.
    ModelParams det = p;
    det.sigma = 0.0;

    double r_bar = threshold(det);
    double np = net_production(det);

    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(rounds));
    double r = r0;
    for (int t = 0; t < rounds; ++t) {
        TrajectoryRow row;
        row.t = t;
        row.r = r;
        row.chi = (r <= r_bar);
        if (row.chi) {
            row.s = 1.0;
            row.f = binding_fix(det, r, 1.0);
            row.z = 1.0 / det.c;
            row.v = r;
            row.pi = np - r;
            // reference is stationary under contract
        } else {
            r = det.beta * r;
        }
        rows.push_back(row);
    }
    return rows;
}

BananaTable banana_curve(double c, double delta, const Eigen::ArrayXd& beta_grid) {
    for (Eigen::Index i = 0; i < beta_grid.size(); ++i) {
        double b = beta_grid[i];
        if (!(b > 0.0 && b < 1.0))
            throw DomainError("beta", "beta = " + std::to_string(b) + " outside (0, 1)");
    }

    BananaTable table;
    table.beta = beta_grid;
    table.r_bar.resize(beta_grid.size());
    table.v_at_r_bar.resize(beta_grid.size());
    for (Eigen::Index i = 0; i < beta_grid.size(); ++i) {
        ModelParams p = validate_params(c, 0.0, beta_grid[i], delta, 0.0);
        table.r_bar[i] = threshold(p);
        table.v_at_r_bar[i] = steady_profit(p);
    }
    return table;
}

}  // namespace gig
