#include "betwise/importance.hpp"

#include <cmath>

#include "betwise/errors.hpp"
#include "betwise/quadrature.hpp"

namespace betwise {

namespace {
constexpr int kEnvelopeGridPoints = 10'001;
constexpr double kEnvelopeSafety = 1.1;
constexpr double kMinNormalizer = 1e-12;
}  // namespace

double OptimalProposal::density(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    return std::fabs(x - target_mean) * betwise::density(target, x) / normalizer;
}

OptimalProposal build_optimal_proposal(const DistributionSpec& target) {
    if (!has_density(target))
        throw UnsupportedDensityError("optimal-IS proposal needs a continuous target: " +
                                      target.label());

    OptimalProposal proposal{target, moments(target).mean, 1.0, 0.0};

    // |x - mu| kinks at the mean; give the quadrature a panel boundary there.
    auto panels = density_breakpoints(target);
    panels.push_back(proposal.target_mean);
    const double z = integrate_piecewise(
        [&](double x) { return std::fabs(x - proposal.target_mean) * density(target, x); },
        panels, 1e-10);
    if (!(z >= kMinNormalizer))
        throw Error("optimal-IS normalizer is degenerate (point-mass-like target): " +
                    target.label());
    proposal.normalizer = z;

    double grid_max = 0.0;
    for (int i = 0; i < kEnvelopeGridPoints; ++i) {
        const double x = static_cast<double>(i) / (kEnvelopeGridPoints - 1);
        const double q = proposal.density(x);
        if (!std::isfinite(q))
            throw Error("target density unbounded on [0,1]; rejection envelope does not exist: " +
                        target.label());
        grid_max = std::max(grid_max, q);
    }
    proposal.envelope = kEnvelopeSafety * grid_max;
    return proposal;
}

double rejection_sample(const OptimalProposal& proposal, RandomStream& stream, int max_tries,
                        long* attempts_out) {
    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        const double x = stream.uniform();
        const double u = stream.uniform();
        if (u * proposal.envelope <= proposal.density(x)) {
            if (attempts_out) *attempts_out += attempt;
            return x;
        }
    }
    throw Error("rejection sampling exceeded retry cap; envelope does not dominate q*");
}

double is_estimate(std::span<const double> samples, const OptimalProposal& proposal,
                   bool self_normalized) {
    if (samples.empty()) throw Error("is_estimate needs at least one sample");
    double weighted = 0.0;
    double total_weight = 0.0;
    for (double x : samples) {
        const double q = proposal.density(x);
        if (!(q > 0.0))
            throw Error("importance weight undefined: sample where the proposal vanishes");
        const double w = density(proposal.target, x) / q;
        weighted += w * x;
        total_weight += w;
    }
    if (self_normalized) return weighted / total_weight;
    return weighted / static_cast<double>(samples.size());
}

}  // namespace betwise
