#include "gig/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gig {

void GridSpec::validate() const {
    if (!(r_min < r_max) || !std::isfinite(r_min) || !std::isfinite(r_max))
        throw DomainError("grid", "grid requires r_min < r_max, got [" +
                                      std::to_string(r_min) + ", " + std::to_string(r_max) + "]");
    if (points < 2) throw DomainError("grid", "grid requires at least 2 points");
}

GridSpec default_grid(const ModelParams& p, int points) {
    GridSpec g;
    g.r_min = std::min(0.0, -4.0 * p.sigma);
    g.r_max = 1.0 / (2.0 * p.c) + 4.0 * p.sigma * (1.0 - p.beta);
    g.points = points;
    g.validate();
    return g;
}

double interp(const GridSpec& g, const Eigen::ArrayXd& values, double r) {
    double h = g.spacing();
    double pos = (r - g.r_min) / h;
    Eigen::Index lo = static_cast<Eigen::Index>(std::floor(pos));
    lo = std::clamp<Eigen::Index>(lo, 0, g.points - 2);
    double t = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    return (1.0 - t) * values[lo] + t * values[lo + 1];
}

}  // namespace gig
