#include "gig/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gig {

namespace {

std::string range_message(const char* field, double value, const char* domain) {
    return std::string(field) + " = " + std::to_string(value) + " outside " + domain;
}

}  // namespace

ModelParams validate_params(double c, double gamma, double beta, double delta, double sigma) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError("c", range_message("c", c, "(0, inf)"));
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw DomainError("gamma", range_message("gamma", gamma, "[0, inf)"));
    if (!(beta > 0.0 && beta < 1.0))
        throw DomainError("beta", range_message("beta", beta, "(0, 1)"));
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("delta", range_message("delta", delta, "(0, 1)"));
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw DomainError("sigma", range_message("sigma", sigma, "[0, inf)"));
    return ModelParams{c, gamma, beta, delta, sigma};
}

void validate(const ModelParams& p) {
    validate_params(p.c, p.gamma, p.beta, p.delta, p.sigma);
}

double optimal_effort(const ModelParams& p, const Contract& k) {
    return k.chi ? k.s / p.c : 0.0;
}

double certainty_equivalent(const ModelParams& p, const Contract& k, double z) {
    if (!k.chi) throw NoContract();
    return k.s * z + k.f - p.c * z * z / 2.0 - p.gamma * k.s * k.s * p.sigma * p.sigma / 2.0;
}

double expected_utility(const ModelParams& p, const Contract& k, double z) {
    if (!k.chi) return 0.0;
    double exponent = -p.gamma * certainty_equivalent(p, k, z);
    // exp overflows past ~709; pin the saturated value instead of relying on errno
    if (exponent > 709.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(exponent);
}

double binding_fix(const ModelParams& p, double r, double s) {
    return r - s * s / (2.0 * p.c) + p.gamma * s * s * p.sigma * p.sigma / 2.0;
}

double expected_profit_binding(const ModelParams& p, double r, double s) {
    return s / p.c - s * s * (1.0 / (2.0 * p.c) + p.gamma * p.sigma * p.sigma / 2.0) - r;
}

double one_shot_share(const ModelParams& p) {
    return 1.0 / (1.0 + p.c * p.gamma * p.sigma * p.sigma);
}

double reference_update(const ModelParams& p, double r, double v, bool chi) {
    return p.beta * r + (1.0 - p.beta) * (chi ? v : 0.0);
}

RoundOutcome realize_round(const ModelParams& p, const WorkerState& state,
                           const Contract& k, double epsilon) {
    RoundOutcome out{};
    out.epsilon = epsilon;
    if (!k.chi) {
        out.r_next = p.beta * state.r;
        return out;
    }

    double z = k.s / p.c;
    double ce = certainty_equivalent(p, k, z);
    if (ce < state.r - kParticipationTol) throw ParticipationViolated(ce, state.r);

    out.z = z;
    out.x = z + epsilon;
    out.w = k.s * out.x + k.f;
    out.v = out.w - p.c * z * z / 2.0;
    out.pi = (1.0 - k.s) * (z + epsilon) - k.f;
    out.r_next = p.beta * state.r + (1.0 - p.beta) * out.v;
    return out;
}

}  // namespace gig
