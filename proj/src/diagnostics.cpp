#include "betwise/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "betwise/errors.hpp"

namespace betwise {

EValueReport evalue_check(double final_wealth, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
    EValueReport report;
    report.final_wealth = final_wealth;
    report.alpha = alpha;
    report.threshold = 1.0 / alpha;
    report.exceeds = final_wealth >= report.threshold;
    return report;
}

EValueReport evalue_check(const WealthProcess& wealth, double alpha) {
    return evalue_check(wealth.current(), alpha);
}

std::string describe(const EValueReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "final wealth %.6g vs threshold %.6g (alpha=%g): %s", report.final_wealth,
                  report.threshold, report.alpha,
                  report.exceeds ? "evidence of predictive edge (no-edge null rejected)"
                                 : "no evidence against the no-edge null");
    return buf;
}

MseDecomposition mse_decomposition(const Eigen::ArrayXd& weights, const Eigen::ArrayXd& sigma_sq,
                                   const Eigen::ArrayXd& beta, double sigma_sq_target, int n) {
    if (weights.size() != sigma_sq.size() || weights.size() != beta.size())
        throw ConfigError("mse_decomposition: weights, sigma_sq and beta lengths must match");
    if (weights.size() == 0) throw ConfigError("mse_decomposition: empty inputs");
    if (std::fabs(weights.sum() - 1.0) > 1e-9)
        throw ConfigError("mse_decomposition: weights must sum to 1");
    if (n < 1) throw ConfigError("mse_decomposition: n must be >= 1");

    MseDecomposition out;
    out.weights = weights;
    out.sigma_sq = sigma_sq;
    out.beta = beta;
    out.variance_term = (weights.square() * sigma_sq).sum();
    const double weighted_beta = (weights * beta).sum();
    out.bias_term = weighted_beta * weighted_beta;
    out.mc_variance = sigma_sq_target / static_cast<double>(n);
    out.efficiency_holds = out.mc_variance - out.variance_term > out.bias_term;
    return out;
}

Eigen::ArrayXd inverse_variance_weights(const Eigen::ArrayXd& sigma_sq, double variance_floor) {
    Eigen::ArrayXd inverse = sigma_sq.max(variance_floor).inverse();
    return inverse / inverse.sum();
}

NullSimulationReport null_exceedance_simulation(int rounds, double stake, double alpha,
                                                int replications, RandomStream& stream) {
    if (rounds < 1) throw ConfigError("null simulation needs rounds >= 1");
    if (!(stake >= 0.0) || stake > 1.0) throw ConfigError("stake must be in [0, 1]");
    if (replications < 1) throw ConfigError("null simulation needs replications >= 1");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");

    NullSimulationReport report;
    report.rounds = rounds;
    report.stake = stake;
    report.alpha = alpha;
    report.threshold = 1.0 / alpha;
    report.replications = replications;
    report.bound = alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / replications);
    report.mean_wealth.assign(static_cast<std::size_t>(rounds) + 1, 0.0);
    std::vector<double> m2(static_cast<std::size_t>(rounds) + 1, 0.0);  // Welford accumulators

    const double tau = 0.5;
    int exceed_count = 0;
    for (int rep = 0; rep < replications; ++rep) {
        double wealth = 1.0;
        for (int t = 0; t <= rounds; ++t) {
            if (t > 0) {
                const int direction = stream.uniform() < 0.5 ? +1 : -1;  // independent of outcome
                const double y = stream.uniform();                       // symmetric around tau
                wealth = std::max(0.0, wealth * (1.0 + stake * payoff(y, tau, direction)));
            }
            const std::size_t i = static_cast<std::size_t>(t);
            const double delta = wealth - report.mean_wealth[i];
            report.mean_wealth[i] += delta / static_cast<double>(rep + 1);
            m2[i] += delta * (wealth - report.mean_wealth[i]);
        }
        if (wealth >= report.threshold) ++exceed_count;
    }
    report.std_wealth.resize(report.mean_wealth.size());
    for (std::size_t i = 0; i < m2.size(); ++i)
        report.std_wealth[i] =
            replications > 1 ? std::sqrt(m2[i] / static_cast<double>(replications - 1)) : 0.0;
    report.exceedance_rate = static_cast<double>(exceed_count) / replications;
    return report;
}

}  // namespace betwise
