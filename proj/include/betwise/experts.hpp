#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "betwise/distributions.hpp"
#include "betwise/random.hpp"
#include "betwise/subprocess.hpp"

namespace betwise {

/// Trust-weighted summary of the bank: m = sum(pi*mu), v = sum(pi*sigma^2).
/// v is the weight-averaged expert variance, not the full mixture variance.
struct MixtureMoments {
    double m = 0.0;
    double v = 0.0;
};

/// Negative Gaussian log-likelihood 0.5*(log(2*pi*var) + (y-mu)^2/var).
/// Larger means worse fit. Caller guarantees var > 0 (experts floor it).
double gaussian_log_score(double y, double mu, double variance);

/// Softmax with max-subtraction; sums to 1 and is invariant to shifting all
/// scores by a constant.
template <typename Derived>
Eigen::ArrayXd softmax_weights(const Eigen::ArrayBase<Derived>& scores) {
    Eigen::ArrayXd shifted = scores.derived() - scores.derived().maxCoeff();
    Eigen::ArrayXd weights = shifted.exp();
    return weights / weights.sum();
}

/// Moments fixed once from the spec's closed forms.
struct AnalyticSource {
    DistributionSpec spec;
};

/// Moments re-estimated from an accumulating set of simulator draws.
struct SampleSetSource {
    DistributionSpec spec;
    int n_sim = 5;  // fresh draws per refresh
    std::vector<double> samples;
};

/// Moments re-estimated from lines read off an external process: one decimal
/// value in [0,1] per line on stdout. Spawned lazily on first refresh.
struct ExternalSource {
    std::string command;
    int n_sim = 5;
    double timeout_seconds = 30.0;
    std::vector<double> samples;
    std::shared_ptr<LineProcess> process;
};

using ExpertSource = std::variant<AnalyticSource, SampleSetSource, ExternalSource>;

struct Expert {
    std::string id;
    ExpertSource source;
    double mean = 0.5;
    double variance = 1.0 / 12.0;  // uniform prior until two samples exist
    bool failed = false;
};

Expert make_analytic_expert(DistributionSpec spec, double variance_floor = 1e-6);
Expert make_sample_expert(DistributionSpec spec, int n_sim, double variance_floor = 1e-6);
Expert make_external_expert(std::string id, std::string command, int n_sim,
                            double timeout_seconds = 30.0);

/// Pulls n_sim fresh draws into the expert's sample set and recomputes its
/// moments (variance with denominator n-1, floored). Analytic experts are
/// untouched. External failures (exit, malformed line, out-of-range value,
/// timeout) mark the expert failed; its moments keep their last value.
void refresh_expert(Expert& expert, RandomStream& sim_stream, double variance_floor = 1e-6);

/// K experts with cumulative log-scores and softmax trust weights.
class ExpertBank {
public:
    ExpertBank(std::vector<Expert> experts, double eta, double variance_floor = 1e-6,
               bool refresh_each_round = false);

    Eigen::Index size() const { return scores_.size(); }
    double eta() const { return eta_; }
    double variance_floor() const { return variance_floor_; }
    bool refresh_each_round() const { return refresh_each_round_; }
    const std::vector<Expert>& experts() const { return experts_; }
    const Eigen::ArrayXd& scores() const { return scores_; }
    const Eigen::ArrayXd& weights() const { return weights_; }

    /// Refreshes sample-backed experts in id order (deterministic merge);
    /// failed experts drop out of the weights immediately.
    void refresh(RandomStream& sim_stream);

    MixtureMoments mixture_moments() const;

    /// Scores each active expert against the observed outcome
    /// (s -= eta * log-score) and recomputes the trust weights.
    void update_scores(double y);

private:
    void recompute_weights();

    std::vector<Expert> experts_;
    Eigen::ArrayXd scores_;
    Eigen::ArrayXd weights_;
    double eta_;
    double variance_floor_;
    bool refresh_each_round_;
};

}  // namespace betwise
