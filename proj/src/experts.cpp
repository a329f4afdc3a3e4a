#include "betwise/experts.hpp"

#include <cmath>
#include <cstdlib>

#include "betwise/errors.hpp"
#include "betwise/gaussian.hpp"

namespace betwise {

double gaussian_log_score(double y, double mu, double variance) {
    const double residual = y - mu;
    return 0.5 * (std::log(kTwoPi * variance) + residual * residual / variance);
}

namespace {

struct SampleMoments {
    double mean = 0.5;
    double variance = 1.0 / 12.0;
};

SampleMoments moments_of_samples(const std::vector<double>& samples, double variance_floor) {
    SampleMoments out;
    const std::size_t n = samples.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double s : samples) sum += s;
    out.mean = sum / static_cast<double>(n);
    if (n < 2) return out;  // keep the uniform prior variance
    double ss = 0.0;
    for (double s : samples) {
        const double d = s - out.mean;
        ss += d * d;
    }
    out.variance = std::max(ss / static_cast<double>(n - 1), variance_floor);
    return out;
}

// Strict line format: one decimal number, '.' separator, nothing else.
bool parse_sample(const std::string& line, double& value) {
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) return false;
    const auto end = line.find_last_not_of(" \t");
    const std::string token = line.substr(begin, end - begin + 1);
    char* tail = nullptr;
    value = std::strtod(token.c_str(), &tail);
    if (tail == token.c_str() || *tail != '\0') return false;
    return std::isfinite(value) && value >= 0.0 && value <= 1.0;
}

void refresh_from_external(Expert& expert, ExternalSource& src, double variance_floor) {
    if (!src.process) {
        try {
            src.process = std::make_shared<LineProcess>(src.command);
        } catch (const Error&) {
            expert.failed = true;
            return;
        }
    }
    for (int i = 0; i < src.n_sim; ++i) {
        const auto line = src.process->read_line(src.timeout_seconds);
        if (!line) {  // timeout or stream ended early
            expert.failed = true;
            if (const auto status = src.process->exit_status(); status && *status != 0)
                expert.failed = true;
            return;
        }
        double value = 0.0;
        if (!parse_sample(*line, value)) {
            expert.failed = true;
            return;
        }
        src.samples.push_back(value);
    }
    if (const auto status = src.process->exit_status(); status && *status != 0) {
        expert.failed = true;
        return;
    }
    const auto m = moments_of_samples(src.samples, variance_floor);
    expert.mean = m.mean;
    expert.variance = m.variance;
}

}  // namespace

Expert make_analytic_expert(DistributionSpec spec, double variance_floor) {
    const Moments m = moments(spec);
    std::string id = spec.label();
    return Expert{std::move(id), AnalyticSource{std::move(spec)}, m.mean,
                  std::max(m.variance, variance_floor), false};
}

Expert make_sample_expert(DistributionSpec spec, int n_sim, double variance_floor) {
    if (n_sim < 1) throw ConfigError("sample expert needs n_sim >= 1");
    std::string id = spec.label();
    return Expert{std::move(id), SampleSetSource{std::move(spec), n_sim, {}}, 0.5,
                  std::max(1.0 / 12.0, variance_floor), false};
}

Expert make_external_expert(std::string id, std::string command, int n_sim,
                            double timeout_seconds) {
    if (n_sim < 1) throw ConfigError("external expert needs n_sim >= 1");
    return Expert{std::move(id),
                  ExternalSource{std::move(command), n_sim, timeout_seconds, {}, nullptr}, 0.5,
                  1.0 / 12.0, false};
}

void refresh_expert(Expert& expert, RandomStream& sim_stream, double variance_floor) {
    if (expert.failed) return;
    if (auto* sampled = std::get_if<SampleSetSource>(&expert.source)) {
        for (int i = 0; i < sampled->n_sim; ++i)
            sampled->samples.push_back(sample(sampled->spec, sim_stream));
        const auto m = moments_of_samples(sampled->samples, variance_floor);
        expert.mean = m.mean;
        expert.variance = m.variance;
    } else if (auto* external = std::get_if<ExternalSource>(&expert.source)) {
        refresh_from_external(expert, *external, variance_floor);
    }
    // analytic: nothing to do
}

ExpertBank::ExpertBank(std::vector<Expert> experts, double eta, double variance_floor,
                       bool refresh_each_round)
    : experts_(std::move(experts)),
      eta_(eta),
      variance_floor_(variance_floor),
      refresh_each_round_(refresh_each_round) {
    if (experts_.empty()) throw ConfigError("expert bank needs at least one expert");
    if (!(eta_ >= 0.0)) throw ConfigError("eta must be >= 0");
    for (auto& expert : experts_) expert.variance = std::max(expert.variance, variance_floor_);
    scores_ = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(experts_.size()));
    recompute_weights();
}

void ExpertBank::refresh(RandomStream& sim_stream) {
    bool failures = false;
    for (auto& expert : experts_) {
        const bool was_failed = expert.failed;
        refresh_expert(expert, sim_stream, variance_floor_);
        failures |= (expert.failed && !was_failed);
    }
    if (failures) recompute_weights();
}

MixtureMoments ExpertBank::mixture_moments() const {
    MixtureMoments mix;
    for (std::size_t k = 0; k < experts_.size(); ++k) {
        mix.m += weights_[static_cast<Eigen::Index>(k)] * experts_[k].mean;
        mix.v += weights_[static_cast<Eigen::Index>(k)] * experts_[k].variance;
    }
    mix.v = std::max(mix.v, variance_floor_);
    return mix;
}

void ExpertBank::update_scores(double y) {
    for (std::size_t k = 0; k < experts_.size(); ++k) {
        if (experts_[k].failed) continue;  // frozen
        scores_[static_cast<Eigen::Index>(k)] -=
            eta_ * gaussian_log_score(y, experts_[k].mean, experts_[k].variance);
    }
    recompute_weights();
}

void ExpertBank::recompute_weights() {
    std::vector<Eigen::Index> active;
    active.reserve(experts_.size());
    for (std::size_t k = 0; k < experts_.size(); ++k)
        if (!experts_[k].failed) active.push_back(static_cast<Eigen::Index>(k));
    if (active.empty()) throw Error("all experts in the bank have failed");

    Eigen::ArrayXd active_scores(static_cast<Eigen::Index>(active.size()));
    for (Eigen::Index i = 0; i < active_scores.size(); ++i)
        active_scores[i] = scores_[active[static_cast<std::size_t>(i)]];
    const Eigen::ArrayXd active_weights = softmax_weights(active_scores);

    weights_ = Eigen::ArrayXd::Zero(scores_.size());
    for (Eigen::Index i = 0; i < active_scores.size(); ++i)
        weights_[active[static_cast<std::size_t>(i)]] = active_weights[i];
}

}  // namespace betwise
