#include "betwise/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betwise/errors.hpp"
#include "betwise/gaussian.hpp"

namespace betwise {

namespace {

constexpr double kMinTruncationMass = 1e-12;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid distribution parameters: " + what);
}

// --- truncated normal on [0,1] ---

struct TnConstants {
    double alpha, beta, mass, pdf_alpha, pdf_beta, cdf_alpha;
};

TnConstants tn_constants(double loc, double scale) {
    TnConstants c{};
    c.alpha = (0.0 - loc) / scale;
    c.beta = (1.0 - loc) / scale;
    c.cdf_alpha = norm_cdf(c.alpha);
    c.mass = norm_cdf(c.beta) - c.cdf_alpha;
    c.pdf_alpha = norm_pdf(c.alpha);
    c.pdf_beta = norm_pdf(c.beta);
    return c;
}

Moments tn_moments(double loc, double scale) {
    const TnConstants c = tn_constants(loc, scale);
    const double ratio = (c.pdf_alpha - c.pdf_beta) / c.mass;
    Moments m;
    m.mean = clamp01(loc + scale * ratio);
    const double second = 1.0 + (c.alpha * c.pdf_alpha - c.beta * c.pdf_beta) / c.mass - ratio * ratio;
    m.variance = std::max(0.0, scale * scale * second);
    return m;
}

double tn_density(double loc, double scale, double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    const TnConstants c = tn_constants(loc, scale);
    return norm_pdf((x - loc) / scale) / (scale * c.mass);
}

double tn_sample(double loc, double scale, RandomStream& stream) {
    const TnConstants c = tn_constants(loc, scale);
    const double u = stream.uniform();
    return clamp01(loc + scale * norm_quantile(c.cdf_alpha + u * c.mass));
}

// --- beta ---

double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

Moments beta_moments(const BetaParams& p) {
    const double s = p.alpha + p.beta;
    return {p.alpha / s, p.alpha * p.beta / (s * s * (s + 1.0))};
}

double beta_density(const BetaParams& p, double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (x == 0.0 || x == 1.0) {
        const double edge_exponent = (x == 0.0) ? p.alpha - 1.0 : p.beta - 1.0;
        if (edge_exponent > 0.0) return 0.0;
        if (edge_exponent == 0.0)
            return std::exp(-log_beta_fn(p.alpha, p.beta));
        return std::numeric_limits<double>::infinity();
    }
    return std::exp((p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) -
                    log_beta_fn(p.alpha, p.beta));
}

// Marsaglia-Tsang; uniforms map through the normal quantile so the draw count
// stays deterministic per accepted candidate.
double gamma_sample(double shape, RandomStream& stream) {
    if (shape < 1.0) {
        const double u = stream.uniform_positive();
        return gamma_sample(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = norm_quantile(stream.uniform_positive());
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.uniform_positive();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double beta_sample(const BetaParams& p, RandomStream& stream) {
    const double ga = gamma_sample(p.alpha, stream);
    const double gb = gamma_sample(p.beta, stream);
    const double s = ga + gb;
    if (s <= 0.0) return beta_moments(p).mean;  // both draws underflowed
    return clamp01(ga / s);
}

// --- uniform spike ---

struct SpikeBand {
    double lo, hi;
};

SpikeBand spike_band(const UniformSpikeParams& p) {
    return {std::max(0.0, p.center - p.halfwidth), std::min(1.0, p.center + p.halfwidth)};
}

Moments mixture_of(const std::vector<std::pair<double, Moments>>& parts) {
    Moments out;
    for (const auto& [w, m] : parts) out.mean += w * m.mean;
    for (const auto& [w, m] : parts) {
        const double d = m.mean - out.mean;
        out.variance += w * (m.variance + d * d);
    }
    return out;
}

struct Validator {
    void operator()(const BetaParams& p) const {
        require(std::isfinite(p.alpha) && p.alpha > 0.0, "beta alpha must be > 0");
        require(std::isfinite(p.beta) && p.beta > 0.0, "beta beta must be > 0");
    }
    void operator()(const TruncatedNormalParams& p) const {
        require(std::isfinite(p.loc), "truncated normal loc must be finite");
        require(std::isfinite(p.scale) && p.scale > 0.0, "truncated normal scale must be > 0");
        require(tn_constants(p.loc, p.scale).mass >= kMinTruncationMass,
                "truncated normal has negligible mass on [0,1]");
    }
    void operator()(const GaussianMixtureParams& p) const {
        require(!p.components.empty(), "gaussian mixture needs at least one component");
        double total = 0.0;
        for (const auto& c : p.components) {
            require(std::isfinite(c.weight) && c.weight >= 0.0, "mixture weight must be >= 0");
            (*this)(TruncatedNormalParams{c.loc, c.scale});
            total += c.weight;
        }
        require(std::fabs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
    }
    void operator()(const BernoulliParams& p) const {
        require(std::isfinite(p.p) && p.p >= 0.0 && p.p <= 1.0, "bernoulli p must be in [0,1]");
    }
    void operator()(const BimodalParams& p) const {
        require(std::isfinite(p.first_weight) && p.first_weight >= 0.0 && p.first_weight <= 1.0,
                "bimodal weight must be in [0,1]");
        (*this)(p.first);
        (*this)(p.second);
    }
    void operator()(const UniformSpikeParams& p) const {
        require(std::isfinite(p.center) && p.center >= 0.0 && p.center <= 1.0,
                "spike center must be in [0,1]");
        require(std::isfinite(p.halfwidth) && p.halfwidth > 0.0, "spike halfwidth must be > 0");
        require(std::isfinite(p.mass) && p.mass >= 0.0 && p.mass <= 1.0,
                "spike mass must be in [0,1]");
    }
};

}  // namespace

DistributionSpec::DistributionSpec(FamilyParams family, std::string label)
    : family_(std::move(family)), label_(std::move(label)) {
    std::visit(Validator{}, family_);
}

const char* family_name(const DistributionSpec& spec) {
    struct Namer {
        const char* operator()(const BetaParams&) const { return "beta"; }
        const char* operator()(const TruncatedNormalParams&) const { return "truncated_normal"; }
        const char* operator()(const GaussianMixtureParams&) const { return "gaussian_mixture"; }
        const char* operator()(const BernoulliParams&) const { return "bernoulli"; }
        const char* operator()(const BimodalParams&) const { return "bimodal"; }
        const char* operator()(const UniformSpikeParams&) const { return "uniform_spike"; }
    };
    return std::visit(Namer{}, spec.family());
}

double sample(const DistributionSpec& spec, RandomStream& stream) {
    struct Sampler {
        RandomStream& stream;
        double operator()(const BetaParams& p) const { return beta_sample(p, stream); }
        double operator()(const TruncatedNormalParams& p) const {
            return tn_sample(p.loc, p.scale, stream);
        }
        double operator()(const GaussianMixtureParams& p) const {
            const double u = stream.uniform();
            double acc = 0.0;
            for (const auto& c : p.components) {
                acc += c.weight;
                if (u < acc) return tn_sample(c.loc, c.scale, stream);
            }
            return tn_sample(p.components.back().loc, p.components.back().scale, stream);
        }
        double operator()(const BernoulliParams& p) const {
            return stream.uniform() < p.p ? 1.0 : 0.0;
        }
        double operator()(const BimodalParams& p) const {
            const double u = stream.uniform();
            return beta_sample(u < p.first_weight ? p.first : p.second, stream);
        }
        double operator()(const UniformSpikeParams& p) const {
            const double u = stream.uniform();
            const double pos = stream.uniform();
            if (u < p.mass) {
                const auto band = spike_band(p);
                return band.lo + pos * (band.hi - band.lo);
            }
            return pos;
        }
    };
    return std::visit(Sampler{stream}, spec.family());
}

Moments moments(const DistributionSpec& spec) {
    struct Calc {
        Moments operator()(const BetaParams& p) const { return beta_moments(p); }
        Moments operator()(const TruncatedNormalParams& p) const {
            return tn_moments(p.loc, p.scale);
        }
        Moments operator()(const GaussianMixtureParams& p) const {
            std::vector<std::pair<double, Moments>> parts;
            parts.reserve(p.components.size());
            for (const auto& c : p.components)
                parts.emplace_back(c.weight, tn_moments(c.loc, c.scale));
            return mixture_of(parts);
        }
        Moments operator()(const BernoulliParams& p) const { return {p.p, p.p * (1.0 - p.p)}; }
        Moments operator()(const BimodalParams& p) const {
            return mixture_of({{p.first_weight, beta_moments(p.first)},
                               {1.0 - p.first_weight, beta_moments(p.second)}});
        }
        Moments operator()(const UniformSpikeParams& p) const {
            const auto band = spike_band(p);
            const Moments whole{0.5, 1.0 / 12.0};
            const double width = band.hi - band.lo;
            const Moments spike{0.5 * (band.lo + band.hi), width * width / 12.0};
            return mixture_of({{1.0 - p.mass, whole}, {p.mass, spike}});
        }
    };
    return std::visit(Calc{}, spec.family());
}

bool has_density(const DistributionSpec& spec) {
    return !std::holds_alternative<BernoulliParams>(spec.family());
}

double density(const DistributionSpec& spec, double x) {
    struct Pdf {
        double x;
        double operator()(const BetaParams& p) const { return beta_density(p, x); }
        double operator()(const TruncatedNormalParams& p) const {
            return tn_density(p.loc, p.scale, x);
        }
        double operator()(const GaussianMixtureParams& p) const {
            double total = 0.0;
            for (const auto& c : p.components) total += c.weight * tn_density(c.loc, c.scale, x);
            return total;
        }
        double operator()(const BernoulliParams&) const {
            throw UnsupportedDensityError("bernoulli has no density on [0,1]");
        }
        double operator()(const BimodalParams& p) const {
            return p.first_weight * beta_density(p.first, x) +
                   (1.0 - p.first_weight) * beta_density(p.second, x);
        }
        double operator()(const UniformSpikeParams& p) const {
            if (x < 0.0 || x > 1.0) return 0.0;
            const auto band = spike_band(p);
            double value = 1.0 - p.mass;
            if (x >= band.lo && x <= band.hi) value += p.mass / (band.hi - band.lo);
            return value;
        }
    };
    return std::visit(Pdf{x}, spec.family());
}

std::vector<double> density_breakpoints(const DistributionSpec& spec) {
    std::vector<double> points{0.0, 1.0};
    if (const auto* spike = std::get_if<UniformSpikeParams>(&spec.family())) {
        const auto band = spike_band(*spike);
        if (band.lo > 0.0) points.push_back(band.lo);
        if (band.hi < 1.0) points.push_back(band.hi);
    }
    std::sort(points.begin(), points.end());
    return points;
}

}  // namespace betwise
