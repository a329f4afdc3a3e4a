#include "betwise/betting.hpp"

#include <algorithm>

#include "betwise/errors.hpp"

namespace betwise {

void Ledger::append(double outcome, double stake) {
    entries_.push_back({outcome, stake});
    stake_sum_ += stake;
    weighted_sum_ += stake * outcome;
}

double bet_weighted_estimate(const Ledger& ledger) {
    if (!(ledger.stake_sum() > 0.0))
        throw UndefinedEstimateError("bet-weighted estimate undefined: total stake is zero");
    return ledger.tau();
}

double payoff(double y, double tau_prev, int direction) {
    return static_cast<double>(direction) * (y - tau_prev);
}

void WealthProcess::update(double stake, double payoff_value) {
    const double growth = 1.0 + stake * payoff_value;
    // growth >= 0 holds for stake <= 1, payoff >= -1; the max guards rounding.
    trajectory_.push_back(std::max(0.0, trajectory_.back() * growth));
}

RoundOutcome run_round(const BetDecision& decision, const std::function<double()>& sample_real,
                       Ledger& ledger, WealthProcess& wealth) {
    const double tau_prev = ledger.tau();
    RoundOutcome round;
    round.decision = decision;
    round.outcome = sample_real();
    ledger.append(round.outcome, decision.stake);
    round.payoff = payoff(round.outcome, tau_prev, decision.direction);
    wealth.update(decision.stake, round.payoff);
    round.tau_after = ledger.tau();
    round.wealth_after = wealth.current();
    return round;
}

}  // namespace betwise
