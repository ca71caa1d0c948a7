#pragma once

#include <Eigen/Core>

#include "gig/errors.hpp"

namespace gig {

// Gauss-Hermite rule mapped onto eps ~ N(0, sigma^2): abscissae eps and
// probability weights summing to one, so E[f(eps)] ~= sum_i weight_i f(eps_i).
struct GaussHermite {
    Eigen::ArrayXd eps;
    Eigen::ArrayXd weight;
};

// Nodes and weights by Golub-Welsch (eigen-decomposition of the Jacobi
// matrix of the Hermite recurrence). Throws QuadratureError for n < 1.
GaussHermite gauss_hermite_normal(int n, double sigma);

}  // namespace gig
