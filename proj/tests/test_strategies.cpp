#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "betwise/betting.hpp"
#include "betwise/errors.hpp"
#include "betwise/random.hpp"
#include "betwise/strategies.hpp"

using namespace betwise;

TEST_CASE("edge examples") {
    CHECK(compute_edge(0.8, 0.5, +1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(compute_edge(0.5, 0.5, +1) == 0.0);
    CHECK(compute_edge(0.2, 0.5, -1) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("ideal kelly stake rule") {
    const KellyParams half{0.5, 1e-3, 1e-6};
    const BetDecision a = ideal_kelly_bet(0.8, 0.25, 0.5, half);
    CHECK(a.raw_stake == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(a.stake == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(a.direction == +1);

    const KellyParams full{1.0, 1e-3, 1e-6};
    const BetDecision b = ideal_kelly_bet(0.8, 0.09, 0.5, full);
    CHECK(b.raw_stake == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(b.stake == 1.0);

    const BetDecision tie = ideal_kelly_bet(0.5, 0.04, 0.5, full);
    CHECK(tie.stake == full.stake_floor);
    CHECK(tie.direction == +1);
}

TEST_CASE("approximated kelly stake rule") {
    const KellyParams full{1.0, 1e-3, 1e-6};
    const BetDecision a = approx_kelly_bet(0.6, 0.5, 0.5, full);
    CHECK(a.stake == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(a.direction == +1);

    const BetDecision tie = approx_kelly_bet(0.5, 0.3, 0.5, full);
    CHECK(tie.stake == full.stake_floor);

    const KellyParams half{0.5, 1e-3, 1e-6};
    const BetDecision c = approx_kelly_bet(0.2, 0.1, 0.5, half);
    CHECK(c.raw_stake == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(c.stake == 1.0);
    CHECK(c.direction == -1);
}

TEST_CASE("monte carlo bet and ruin boundary") {
    CHECK(mc_bet().stake == 1.0);
    CHECK(mc_bet().direction == +1);

    // unit stakes: estimator equals the running mean; wealth can hit zero and stay there
    Ledger ledger(0.5);
    WealthProcess wealth;
    run_round(mc_bet(), [] { return 1.0; }, ledger, wealth);  // tau -> 1
    run_round(mc_bet(), [] { return 0.0; }, ledger, wealth);  // payoff -1 at stake 1
    CHECK(wealth.current() == 0.0);
    run_round(mc_bet(), [] { return 0.8; }, ledger, wealth);
    CHECK(wealth.current() == 0.0);
    CHECK(bet_weighted_estimate(ledger) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("doubling lambda doubles the raw stake exactly") {
    RandomStream stream(77);
    for (int i = 0; i < 100; ++i) {
        const double mu = stream.uniform();
        const double tau = stream.uniform();
        const double var = 0.01 + stream.uniform();
        const double lambda = 0.05 + 0.45 * stream.uniform();
        const KellyParams one{lambda, 1e-3, 1e-6};
        const KellyParams two{2.0 * lambda, 1e-3, 1e-6};
        CHECK(ideal_kelly_bet(mu, var, tau, two).raw_stake ==
              2.0 * ideal_kelly_bet(mu, var, tau, one).raw_stake);
    }
}

TEST_CASE("chosen direction never has negative modeled edge") {
    RandomStream stream(13);
    const KellyParams params{1.0, 1e-3, 1e-6};
    for (int i = 0; i < 500; ++i) {
        const double mu = stream.uniform();
        const double tau = stream.uniform();
        const BetDecision bet = ideal_kelly_bet(mu, 0.1, tau, params);
        CHECK(compute_edge(mu, tau, bet.direction) >= 0.0);
    }
}

TEST_CASE("inverse-variance shape of normalized stakes") {
    // fixed |mu - tau| across rounds, only sigma^2 varies, clamp-free regime
    const KellyParams params{1.0, 1e-6, 1e-9};
    const double tau = 0.4;
    const double gap = 0.05;
    const std::vector<double> variances{0.3, 0.5, 0.8};

    std::vector<double> stakes;
    double total = 0.0;
    for (std::size_t t = 0; t < variances.size(); ++t) {
        const double mu = (t % 2 == 0) ? tau + gap : tau - gap;  // same |edge| either side
        const BetDecision bet = ideal_kelly_bet(mu, variances[t], tau, params);
        CHECK(bet.raw_stake < 1.0);
        CHECK(bet.raw_stake > params.stake_floor);
        stakes.push_back(bet.stake);
        total += bet.stake;
    }

    double inv_total = 0.0;
    for (double v : variances) inv_total += 1.0 / v;
    for (std::size_t t = 0; t < variances.size(); ++t) {
        const double analytic = (1.0 / variances[t]) / inv_total;
        CHECK(std::fabs(stakes[t] / total - analytic) <= 1e-12);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(KellyParams{0.0, 1e-3, 1e-6}), ConfigError);
    CHECK_THROWS_AS(validate(KellyParams{1.5, 1e-3, 1e-6}), ConfigError);
    CHECK_THROWS_AS(validate(KellyParams{1.0, 0.0, 1e-6}), ConfigError);
    CHECK_THROWS_AS(validate(KellyParams{1.0, 1e-3, 0.0}), ConfigError);
    CHECK_NOTHROW(validate(KellyParams{0.5, 1e-3, 1e-6}));
}
