#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "betwise/betting.hpp"
#include "betwise/errors.hpp"
#include "betwise/random.hpp"

using namespace betwise;

TEST_CASE("payoff is the signed margin") {
    CHECK(payoff(0.7, 0.5, +1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(payoff(0.7, 0.5, -1) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(payoff(0.42, 0.42, +1) == 0.0);
    CHECK(payoff(0.42, 0.42, -1) == 0.0);
}

TEST_CASE("wealth update") {
    WealthProcess w;
    w.update(0.5, 0.2);
    CHECK(w.current() == 1.0 * (1.0 + 0.5 * 0.2));

    WealthProcess idle;
    idle.update(0.0, -0.9);
    CHECK(idle.current() == 1.0);

    WealthProcess ruined;
    ruined.update(1.0, -1.0);
    CHECK(ruined.current() == 0.0);
    ruined.update(1.0, 0.9);  // absorbing at zero
    CHECK(ruined.current() == 0.0);
    CHECK(ruined.trajectory().front() == 1.0);
}

TEST_CASE("bet-weighted estimate") {
    Ledger ledger(0.5);
    ledger.append(0.2, 0.5);
    ledger.append(0.8, 0.25);
    CHECK(bet_weighted_estimate(ledger) == doctest::Approx(0.4).epsilon(1e-15));

    Ledger equal(0.5);
    for (double y : {0.1, 0.5, 0.9}) equal.append(y, 1.0);
    CHECK(bet_weighted_estimate(equal) == doctest::Approx(0.5).epsilon(1e-15));

    Ledger empty(0.5);
    CHECK_THROWS_AS(bet_weighted_estimate(empty), UndefinedEstimateError);
    CHECK(empty.tau() == 0.5);  // falls back to tau0 before any stake
}

TEST_CASE("unit stakes reproduce the plain mean bit for bit") {
    RandomStream stream(314);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(stream.next_u64() % 400);
        Ledger ledger(0.5);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double y = stream.uniform();
            ledger.append(y, 1.0);
            sum += y;
        }
        CHECK(bet_weighted_estimate(ledger) == sum / static_cast<double>(n));
    }
}

TEST_CASE("run_round composes draw, ledger, wealth, estimate in order") {
    Ledger ledger(0.5);
    WealthProcess wealth;
    const BetDecision bet{0.5, +1, 0.5};
    const RoundOutcome round = run_round(bet, [] { return 0.7; }, ledger, wealth);
    CHECK(round.outcome == 0.7);
    CHECK(round.payoff == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(round.wealth_after == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(round.tau_after == 0.7);  // single entry
    CHECK(ledger.size() == 1);

    // zero-margin round leaves wealth untouched
    Ledger flat(0.5);
    WealthProcess fw;
    const RoundOutcome zero = run_round({1.0, +1, 1.0}, [] { return 0.5; }, flat, fw);
    CHECK(zero.payoff == 0.0);
    CHECK(zero.wealth_after == 1.0);
}

TEST_CASE("three unit-stake rounds track the running sample mean") {
    Ledger ledger(0.5);
    WealthProcess wealth;
    const std::vector<double> ys{0.9, 0.1, 0.6};
    double sum = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i];
        const RoundOutcome round = run_round({1.0, +1, 1.0}, [&] { return y; }, ledger, wealth);
        sum += y;
        CHECK(round.tau_after == sum / static_cast<double>(i + 1));
    }
}

TEST_CASE("wealth stays nonnegative for any admissible sequence") {
    RandomStream stream(2718);
    for (int trial = 0; trial < 50; ++trial) {
        WealthProcess wealth;
        for (int t = 0; t < 200; ++t) {
            const double stake = stream.uniform();
            const double pay = 2.0 * stream.uniform() - 1.0;  // [-1, 1]
            wealth.update(stake, pay);
        }
        for (double w : wealth.trajectory()) CHECK(w >= 0.0);
    }
}

TEST_CASE("estimate stays within the outcome range") {
    RandomStream stream(99);
    for (int trial = 0; trial < 30; ++trial) {
        Ledger ledger(0.5);
        double lo = 1.0, hi = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double y = stream.uniform();
            const double stake = 0.001 + 0.999 * stream.uniform();
            ledger.append(y, stake);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        const double tau = bet_weighted_estimate(ledger);
        CHECK(tau >= lo - 1e-12);
        CHECK(tau <= hi + 1e-12);
    }
}

TEST_CASE("estimate after t rounds depends only on the first t entries") {
    RandomStream stream(555);
    std::vector<std::pair<double, double>> entries;
    for (int t = 0; t < 50; ++t) entries.push_back({stream.uniform(), 0.5 * stream.uniform() + 0.1});

    Ledger incremental(0.5);
    for (int t = 0; t < 50; ++t) {
        incremental.append(entries[t].first, entries[t].second);
        Ledger prefix(0.5);
        for (int i = 0; i <= t; ++i) prefix.append(entries[i].first, entries[i].second);
        CHECK(incremental.tau() == prefix.tau());
        CHECK(incremental.entries()[t].outcome == entries[t].first);
    }
}
