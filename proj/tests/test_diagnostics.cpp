#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "betwise/diagnostics.hpp"
#include "betwise/errors.hpp"
#include "betwise/gaussian.hpp"

using namespace betwise;

TEST_CASE("e-value threshold checks") {
    CHECK(!evalue_check(1.0, 0.05).exceeds);
    const EValueReport boundary = evalue_check(20.0, 0.05);
    CHECK(boundary.threshold == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(boundary.exceeds);  // threshold exactly met counts
    for (double alpha : {0.01, 0.05, 0.1, 0.5}) CHECK(!evalue_check(0.0, alpha).exceeds);
    CHECK_THROWS_AS(evalue_check(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(evalue_check(1.0, 1.0), ConfigError);
}

TEST_CASE("e-value summary avoids probability-of-winning language") {
    const std::string text = describe(evalue_check(25.0, 0.05));
    CHECK(text.find("probability") == std::string::npos);
    CHECK(text.find("evidence") != std::string::npos);
}

TEST_CASE("mse decomposition boundary and hand examples") {
    // uniform weights, constant conditional variance, zero beta: exact boundary
    const int n = 8;
    const double sigma_sq = 0.04;
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, 1.0 / n);
    Eigen::ArrayXd s = Eigen::ArrayXd::Constant(n, sigma_sq);
    Eigen::ArrayXd beta = Eigen::ArrayXd::Zero(n);
    const MseDecomposition uniform = mse_decomposition(w, s, beta, sigma_sq, n);
    CHECK(uniform.variance_term == doctest::Approx(sigma_sq / n).epsilon(1e-14));
    CHECK(uniform.bias_term == 0.0);
    CHECK(!uniform.efficiency_holds);  // strict inequality fails at equality

    Eigen::ArrayXd w2(2), s2(2), b2(2);
    w2 << 0.8, 0.2;
    s2 << 1.0, 4.0;
    b2 << 0.0, 0.0;
    CHECK(mse_decomposition(w2, s2, b2, 1.0, 2).variance_term ==
          doctest::Approx(0.8).epsilon(1e-14));

    // weighted betas that cancel leave no bias penalty
    Eigen::ArrayXd b3(2);
    b3 << 0.1, -0.4;  // 0.8*0.1 + 0.2*(-0.4) = 0
    CHECK(mse_decomposition(w2, s2, b3, 1.0, 2).bias_term == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("mse decomposition input validation") {
    Eigen::ArrayXd w(2), s(3), b(2);
    w << 0.5, 0.5;
    s << 1.0, 1.0, 1.0;
    b << 0.0, 0.0;
    CHECK_THROWS_AS(mse_decomposition(w, s, b, 1.0, 2), ConfigError);
    Eigen::ArrayXd bad = w * 1.5;  // sums to 1.5
    Eigen::ArrayXd s2(2);
    s2 << 1.0, 1.0;
    CHECK_THROWS_AS(mse_decomposition(bad, s2, b, 1.0, 2), ConfigError);
}

TEST_CASE("decomposition matches brute-force mse on a two-round setup") {
    // deterministic weights, normal outcomes with injected mean shifts
    const double mu = 0.5;
    Eigen::ArrayXd w(2), s(2), b(2);
    w << 0.7, 0.3;
    s << 0.04, 0.09;
    b << 0.02, -0.01;
    const MseDecomposition predicted = mse_decomposition(w, s, b, 0.05, 2);

    RandomStream stream(StreamKey::root(29).with("mse").value());
    const int reps = 40'000;
    double sum_sq = 0.0, sum_fourth = 0.0;
    for (int r = 0; r < reps; ++r) {
        double estimate = 0.0;
        for (int t = 0; t < 2; ++t) {
            const double x = mu + b[t] + std::sqrt(s[t]) * norm_quantile(stream.uniform_positive());
            estimate += w[t] * x;
        }
        const double sq = (estimate - mu) * (estimate - mu);
        sum_sq += sq;
        sum_fourth += sq * sq;
    }
    const double mse_hat = sum_sq / reps;
    const double se = std::sqrt((sum_fourth / reps - mse_hat * mse_hat) / reps);
    CHECK(std::fabs(mse_hat - (predicted.variance_term + predicted.bias_term)) <= 3.0 * se);
}

TEST_CASE("inverse-variance weights") {
    Eigen::ArrayXd two(2);
    two << 1.0, 4.0;
    const Eigen::ArrayXd w2 = inverse_variance_weights(two);
    CHECK(w2[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(w2[1] == doctest::Approx(0.2).epsilon(1e-14));

    Eigen::ArrayXd equal = Eigen::ArrayXd::Constant(5, 0.3);
    const Eigen::ArrayXd w5 = inverse_variance_weights(equal);
    for (int k = 0; k < 5; ++k) CHECK(w5[k] == doctest::Approx(0.2).epsilon(1e-14));

    Eigen::ArrayXd three(3);
    three << 1.0, 1.0, 2.0;
    const Eigen::ArrayXd w3 = inverse_variance_weights(three);
    CHECK(w3[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(w3[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(w3[2] == doctest::Approx(0.2).epsilon(1e-14));

    // cross-check by one-dimensional grid minimization at step 0.001
    double best = 1e9, best_w = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double w = i / 1000.0;
        const double value = w * w * 1.0 + (1.0 - w) * (1.0 - w) * 4.0;
        if (value < best) {
            best = value;
            best_w = w;
        }
    }
    CHECK(std::fabs(best_w - 0.8) <= 1e-3);
}

TEST_CASE("null simulation stays within the Ville bound") {
    RandomStream stream(StreamKey::root(31).with("null").value());
    const NullSimulationReport zero = null_exceedance_simulation(50, 0.0, 0.25, 200, stream);
    CHECK(zero.exceedance_rate == 0.0);  // wealth pinned at one

    for (double alpha : {0.1, 0.05}) {
        RandomStream s2 = StreamKey::root(31).with("null2").with(alpha == 0.1 ? 1u : 2u).stream();
        const NullSimulationReport report = null_exceedance_simulation(300, 0.5, alpha, 2000, s2);
        CHECK(report.exceedance_rate <= report.bound);
        // supermartingale: mean wealth within Monte Carlo noise of one at every round
        for (std::size_t t = 0; t < report.mean_wealth.size(); ++t) {
            const double margin = 3.0 * report.std_wealth[t] / std::sqrt(2000.0);
            CHECK(report.mean_wealth[t] <= 1.0 + margin);
        }
    }
}

TEST_CASE("null simulation input validation") {
    RandomStream stream(1);
    CHECK_THROWS_AS(null_exceedance_simulation(0, 0.5, 0.1, 10, stream), ConfigError);
    CHECK_THROWS_AS(null_exceedance_simulation(10, 1.5, 0.1, 10, stream), ConfigError);
    CHECK_THROWS_AS(null_exceedance_simulation(10, 0.5, 0.0, 10, stream), ConfigError);
    CHECK_THROWS_AS(null_exceedance_simulation(10, 0.5, 0.1, 0, stream), ConfigError);
}
