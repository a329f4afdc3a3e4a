#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "betwise/betting.hpp"
#include "betwise/random.hpp"

namespace betwise {

/// Wealth-as-evidence check: under the no-edge null, P(W_T >= 1/alpha) <= alpha.
struct EValueReport {
    double final_wealth = 1.0;
    double alpha = 0.05;
    double threshold = 20.0;  // 1/alpha
    bool exceeds = false;
};

EValueReport evalue_check(const WealthProcess& wealth, double alpha);
EValueReport evalue_check(double final_wealth, double alpha);

/// Neutral summary line. Exceeding the threshold is evidence of predictive
/// edge, not a probability of beating the Monte Carlo estimator.
std::string describe(const EValueReport& report);

/// Error split of the bet-weighted estimator for known per-round conditional
/// variances and weight-outcome dependence terms:
///   MSE = sum(w^2 sigma^2) + (sum(w beta))^2
/// against the Monte Carlo reference sigma^2/n. The strict efficiency
/// condition is mc_variance - variance_term > bias_term.
struct MseDecomposition {
    Eigen::ArrayXd weights;
    Eigen::ArrayXd sigma_sq;
    Eigen::ArrayXd beta;
    double variance_term = 0.0;
    double bias_term = 0.0;
    double mc_variance = 0.0;
    bool efficiency_holds = false;
};

MseDecomposition mse_decomposition(const Eigen::ArrayXd& weights, const Eigen::ArrayXd& sigma_sq,
                                   const Eigen::ArrayXd& beta, double sigma_sq_target, int n);

/// w_t = (1/sigma_t^2) / sum_j (1/sigma_j^2); the unique minimizer of
/// sum(w^2 sigma^2) on the simplex.
Eigen::ArrayXd inverse_variance_weights(const Eigen::ArrayXd& sigma_sq,
                                        double variance_floor = 1e-12);

/// Monte Carlo check of the wealth bound under a null that holds exactly:
/// symmetric outcomes around a fixed tau with a coin-flip direction, so
/// E[payoff | past] = 0 at every round.
struct NullSimulationReport {
    int rounds = 0;
    double stake = 0.0;
    double alpha = 0.05;
    double threshold = 20.0;
    int replications = 0;
    double exceedance_rate = 0.0;
    double bound = 0.0;  // alpha + 3*sqrt(alpha*(1-alpha)/replications)
    std::vector<double> mean_wealth;  // across replications, per round (W_0 first)
    std::vector<double> std_wealth;   // across-replication standard deviation per round
};

NullSimulationReport null_exceedance_simulation(int rounds, double stake, double alpha,
                                                int replications, RandomStream& stream);

}  // namespace betwise
