#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace betwise {

/// A directional stake: fraction in [0,1] plus predicted side of the running
/// estimate. raw_stake keeps the pre-clamp value for diagnostics.
struct BetDecision {
    double stake = 0.0;
    int direction = +1;  // +1: outcome above current estimate, -1: below
    double raw_stake = 0.0;
};

struct LedgerEntry {
    double outcome;
    double stake;
};

/// Ordered (outcome, stake) record defining the bet-weighted estimate
/// sum(b*y)/sum(b). Running sums are accumulated in insertion order, so with
/// unit stakes the estimate reproduces the plain mean bit for bit.
class Ledger {
public:
    explicit Ledger(double tau0 = 0.5) : tau0_(tau0) {}

    void append(double outcome, double stake);

    /// Current estimate; tau0 until any stake has been recorded.
    double tau() const { return stake_sum_ > 0.0 ? weighted_sum_ / stake_sum_ : tau0_; }

    double tau0() const { return tau0_; }
    double stake_sum() const { return stake_sum_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<LedgerEntry>& entries() const { return entries_; }

private:
    double tau0_;
    double stake_sum_ = 0.0;
    double weighted_sum_ = 0.0;
    std::vector<LedgerEntry> entries_;
};

/// Bet-weighted estimate of the ledger. Throws UndefinedEstimateError when the
/// total stake is zero (nothing was ever wagered).
double bet_weighted_estimate(const Ledger& ledger);

/// Signed payoff direction*(y - tau_prev): positive iff the directional call
/// was correct, magnitude |y - tau_prev|.
double payoff(double y, double tau_prev, int direction);

/// Multiplicative wealth record: W0 = 1, W <- W*(1 + stake*payoff). Wealth can
/// reach exactly zero (total loss at full stake) and then stays there.
class WealthProcess {
public:
    WealthProcess() : trajectory_{1.0} {}

    void update(double stake, double payoff_value);

    double current() const { return trajectory_.back(); }
    const std::vector<double>& trajectory() const { return trajectory_; }

private:
    std::vector<double> trajectory_;
};

struct RoundOutcome {
    double outcome = 0.0;
    double payoff = 0.0;
    BetDecision decision;
    double tau_after = 0.0;
    double wealth_after = 0.0;
};

/// One betting round: draw a real outcome, append it with the stake, settle
/// wealth against the pre-round estimate, then refresh the estimate. State is
/// mutated in exactly that order.
RoundOutcome run_round(const BetDecision& decision, const std::function<double()>& sample_real,
                       Ledger& ledger, WealthProcess& wealth);

}  // namespace betwise
