#include "betwise/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "betwise/errors.hpp"

namespace betwise {

void validate(const KellyParams& params) {
    if (!(params.kelly_fraction > 0.0) || params.kelly_fraction > 1.0)
        throw ConfigError("kelly_fraction must be in (0, 1]");
    if (!(params.stake_floor > 0.0) || params.stake_floor > 1.0)
        throw ConfigError("stake_floor must be in (0, 1]");
    if (!(params.variance_floor > 0.0)) throw ConfigError("variance_floor must be > 0");
}

double compute_edge(double mu, double tau_prev, int direction) {
    return static_cast<double>(direction) * (mu - tau_prev);
}

namespace {

BetDecision kelly_rule(double mu, double variance, double tau_prev, const KellyParams& params) {
    BetDecision bet;
    bet.direction = mu >= tau_prev ? +1 : -1;
    const double floored_variance = std::max(variance, params.variance_floor);
    bet.raw_stake = params.kelly_fraction * std::fabs(mu - tau_prev) / floored_variance;
    bet.stake = std::clamp(bet.raw_stake, params.stake_floor, 1.0);
    return bet;
}

}  // namespace

BetDecision ideal_kelly_bet(double mu, double variance, double tau_prev,
                            const KellyParams& params) {
    return kelly_rule(mu, variance, tau_prev, params);
}

BetDecision approx_kelly_bet(double mixture_mean, double mixture_variance, double tau_prev,
                             const KellyParams& params) {
    return kelly_rule(mixture_mean, mixture_variance, tau_prev, params);
}

BetDecision mc_bet() { return {1.0, +1, 1.0}; }

}  // namespace betwise
