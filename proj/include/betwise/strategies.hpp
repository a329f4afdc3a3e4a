#pragma once

#include "betwise/betting.hpp"

namespace betwise {

struct KellyParams {
    double kelly_fraction = 1.0;   // lambda in (0,1]; 1 = full Kelly, 0.5 = half
    double stake_floor = 1e-3;     // keeps one real draw per round, so T counts real samples
    double variance_floor = 1e-6;  // guards the stake against degenerate variances
};

/// Throws ConfigError if the parameters leave their valid ranges.
void validate(const KellyParams& params);

/// Directional edge direction*(mu - tau_prev); nonnegative when the direction
/// matches sign(mu - tau_prev).
double compute_edge(double mu, double tau_prev, int direction);

/// Kelly stake lambda*|mu - tau_prev|/max(variance, floor), clamped to
/// [stake_floor, 1]. Direction is sign(mu - tau_prev), +1 on ties.
BetDecision ideal_kelly_bet(double mu, double variance, double tau_prev,
                            const KellyParams& params);

/// Same rule driven by the expert-mixture moments (m_t, v_t).
BetDecision approx_kelly_bet(double mixture_mean, double mixture_variance, double tau_prev,
                             const KellyParams& params);

/// Unit stake; the betting loop then reproduces the plain Monte Carlo mean.
BetDecision mc_bet();

}  // namespace betwise
