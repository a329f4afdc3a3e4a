#pragma once

#include <span>

#include "betwise/distributions.hpp"
#include "betwise/random.hpp"

namespace betwise {

/// Variance-minimizing proposal q*(x) = |x - mu| p(x) / Z for estimating the
/// mean of a continuous target, with Z = E_p|X - mu|.
struct OptimalProposal {
    DistributionSpec target;
    double target_mean = 0.0;
    double normalizer = 0.0;  // Z
    double envelope = 0.0;    // upper bound on q* for uniform-proposal rejection

    double density(double x) const;
};

/// Computes Z by quadrature (absolute tolerance 1e-10) and the rejection
/// envelope as 1.1x the maximum of q* over a 10,001-point grid. Throws for
/// discrete targets, unbounded densities, and degenerate (Z < 1e-12) targets.
OptimalProposal build_optimal_proposal(const DistributionSpec& target);

/// One draw from q* via rejection against a uniform proposal on [0,1].
/// Throws Error if max_tries candidates are rejected (bad envelope). When
/// attempts_out is given, the candidate count is added to it (for realized
/// acceptance-rate reporting).
double rejection_sample(const OptimalProposal& proposal, RandomStream& stream,
                        int max_tries = 1'000'000, long* attempts_out = nullptr);

/// Importance-sampling estimate of the target mean from draws of q*.
/// Self-normalized (default): sum(w*x)/sum(w) with w = p/q*; plain:
/// mean of x*p/q*. Throws if any sample sits where q* vanishes.
double is_estimate(std::span<const double> samples, const OptimalProposal& proposal,
                   bool self_normalized = true);

}  // namespace betwise
