#pragma once

#include <string>
#include <variant>
#include <vector>

#include "betwise/random.hpp"

namespace betwise {

/// Analytic mean/variance pair for a distribution on [0,1].
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Normal(loc, scale) renormalized to [0,1]. Renormalization (rather than
/// clipping) keeps the density continuous, which the IS machinery requires.
struct TruncatedNormalParams {
    double loc = 0.5;
    double scale = 0.1;
};

struct GaussianMixtureComponent {
    double weight = 1.0;
    double loc = 0.5;
    double scale = 0.1;
};

struct GaussianMixtureParams {
    std::vector<GaussianMixtureComponent> components;
};

struct BernoulliParams {
    double p = 0.5;
};

/// Two-component Beta mixture; stays on [0,1] natively with closed-form moments.
struct BimodalParams {
    double first_weight = 0.5;
    BetaParams first;
    BetaParams second;
};

/// (1-mass) * Uniform[0,1] + mass * Uniform on [center-halfwidth, center+halfwidth] ∩ [0,1].
struct UniformSpikeParams {
    double center = 0.5;
    double halfwidth = 0.1;
    double mass = 0.5;
};

using FamilyParams = std::variant<BetaParams, TruncatedNormalParams, GaussianMixtureParams,
                                  BernoulliParams, BimodalParams, UniformSpikeParams>;

/// Immutable description of a parametric distribution on [0,1]. Parameters are
/// validated at construction; sampling and moment queries never fail afterwards.
class DistributionSpec {
public:
    DistributionSpec(FamilyParams family, std::string label);

    const FamilyParams& family() const { return family_; }
    const std::string& label() const { return label_; }

private:
    FamilyParams family_;
    std::string label_;
};

const char* family_name(const DistributionSpec& spec);

/// One draw from the spec; always in [0,1] and fully determined by the stream state.
double sample(const DistributionSpec& spec, RandomStream& stream);

Moments moments(const DistributionSpec& spec);

bool has_density(const DistributionSpec& spec);

/// Lebesgue density on [0,1], truncation renormalization included.
/// Throws UnsupportedDensityError for discrete families.
double density(const DistributionSpec& spec, double x);

/// Panel boundaries for quadrature over the density: [0, 1] plus any interior
/// jump points (uniform-spike band edges).
std::vector<double> density_breakpoints(const DistributionSpec& spec);

}  // namespace betwise
