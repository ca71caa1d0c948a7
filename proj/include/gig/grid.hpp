#pragma once

#include <Eigen/Core>

#include "gig/params.hpp"

namespace gig {

// Uniformly spaced grid over the reference state.
struct GridSpec {
    double r_min = 0.0;
    double r_max = 1.0;
    int points = 2;

    double spacing() const { return (r_max - r_min) / (points - 1); }
    Eigen::ArrayXd nodes() const { return Eigen::ArrayXd::LinSpaced(points, r_min, r_max); }

    // Throws DomainError on a degenerate grid.
    void validate() const;
};

// Recommended state domain: [min(0, -4 sigma), 1/(2c) + 4 sigma (1 - beta)].
// Under the no-contract branch the reference decays toward zero; under
// contract the per-round increment is (1 - beta)(s eps + gamma s^2 sigma^2/2).
GridSpec default_grid(const ModelParams& p, int points = 1201);

// Employer value per grid node, units of average profit per round.
struct ValueTable {
    GridSpec grid;
    Eigen::ArrayXd values;
};

// Contract decision and share per grid node; s is 0 wherever chi is false.
struct PolicyTable {
    GridSpec grid;
    Eigen::Array<bool, Eigen::Dynamic, 1> chi;
    Eigen::ArrayXd s;
};

// Piecewise-linear evaluation with clamped extrapolation beyond the ends.
double interp(const GridSpec& g, const Eigen::ArrayXd& values, double r);

inline double interp(const ValueTable& v, double r) { return interp(v.grid, v.values, r); }

}  // namespace gig
