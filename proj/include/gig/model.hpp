#pragma once

#include "gig/params.hpp"

namespace gig {

// Offers constructed with binding_fix satisfy the participation constraint by
// construction; the check in realize_round allows this much rounding slack.
inline constexpr double kParticipationTol = 1e-9;

// One round's offer. When chi is false the terms s and f are ignored by every
// operation (wage, profit and utility are all zero).
struct Contract {
    bool chi = false;  // contract indicator
    double s = 0.0;    // share of output, unrestricted sign
    double f = 0.0;    // fixed component; a negative value is a rent

    static Contract none() { return {}; }
    static Contract offer(double s, double f) { return {true, s, f}; }
};

// The worker's scalar state: the running reference value R, the cash
// equivalent of his reference utility. May go negative when sigma > 0.
struct WorkerState {
    double r = 0.0;
};

// Full realization of one round.
struct RoundOutcome {
    double epsilon;  // realized output noise
    double z;        // effort
    double x;        // output, chi * (z + epsilon)
    double w;        // wage
    double v;        // net wage, w - c z^2 / 2
    double pi;       // employer profit
    double r_next;   // updated reference
};

// Worker's best-response effort, z* = chi * s / c.
double optimal_effort(const ModelParams& p, const Contract& k);

// E[u(v)] = -chi * exp(-gamma * (s z + f - c z^2/2 - gamma s^2 sigma^2 / 2)).
// Returns 0 when chi is false. Exponent overflow saturates to -inf.
double expected_utility(const ModelParams& p, const Contract& k, double z);

// Certainty equivalent of the contracted round at effort z:
//   CE = s z + f - c z^2/2 - gamma s^2 sigma^2 / 2,  so that u(CE) = E[u(v)].
// Throws NoContract when k.chi is false.
double certainty_equivalent(const ModelParams& p, const Contract& k, double z);

// Fixed component that makes the participation constraint bind at z = s/c:
//   f* = r - s^2/(2c) + gamma s^2 sigma^2 / 2.
double binding_fix(const ModelParams& p, double r, double s);

// Employer's expected profit under the binding fix:
//   E[pi] = s/c - s^2 (1/(2c) + gamma sigma^2 / 2) - r.
double expected_profit_binding(const ModelParams& p, double r, double s);

// One-shot profit-maximizing share, s* = 1 / (1 + c gamma sigma^2).
double one_shot_share(const ModelParams& p);

// Reference update r' = beta r + (1 - beta) v, with v = 0 when no contract.
double reference_update(const ModelParams& p, double r, double v, bool chi);

// Plays out one round for a realized noise draw. A contracted offer must
// satisfy the participation constraint at z* (compared on certainty
// equivalents, slack kParticipationTol); otherwise throws
// ParticipationViolated. Without a contract everything is zero and the
// reference decays to beta * r.
RoundOutcome realize_round(const ModelParams& p, const WorkerState& state,
                           const Contract& k, double epsilon);

}  // namespace gig
