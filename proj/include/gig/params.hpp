#pragma once

#include "gig/errors.hpp"

namespace gig {

// Exogenous parameters: worker (c, gamma, beta), employer (delta), noise (sigma).
// All monetary quantities share one unit; effort cost is c z^2 / 2.
struct ModelParams {
    double c;      // effort-cost coefficient, c > 0
    double gamma;  // absolute risk aversion, gamma >= 0 (0 = risk-neutral limit)
    double beta;   // memory decay of the worker's reference, 0 < beta < 1
    double delta;  // employer's subjective discount factor, 0 < delta < 1
    double sigma;  // std deviation of the output noise, sigma >= 0
};

// Validates the five raw parameters and returns them as a ModelParams.
// Throws DomainError naming the offending field.
ModelParams validate_params(double c, double gamma, double beta, double delta, double sigma);

// Re-checks an already constructed parameter set.
void validate(const ModelParams& p);

}  // namespace gig
