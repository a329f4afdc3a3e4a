#include "betwise/banks.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "betwise/errors.hpp"

namespace betwise {

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(std::string("bank entry missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<double> parse_axis(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("generator missing axis '") + key + "'");
    const json& axis = j.at(key);
    if (axis.is_array()) return axis.get<std::vector<double>>();
    if (axis.contains("values")) return axis.at("values").get<std::vector<double>>();
    const bool geometric = axis.contains("geomspace");
    const json& span = geometric ? axis.at("geomspace")
                                 : (axis.contains("linspace") ? axis.at("linspace") : axis);
    const double start = get_number(span, "start");
    const double stop = get_number(span, "stop");
    const int count = static_cast<int>(get_number(span, "count"));
    if (count < 1) throw ConfigError("axis count must be >= 1");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) return {start};
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out.push_back(geometric ? start * std::pow(stop / start, f)
                                : start + f * (stop - start));
    }
    return out;
}

void append_generated(const json& gen, std::vector<DistributionSpec>& out) {
    const std::string family = gen.value("family", "");
    if (family == "beta") {
        for (double a : parse_axis(gen, "a"))
            for (double b : parse_axis(gen, "b"))
                out.emplace_back(BetaParams{a, b}, "beta(" + fmt(a) + "," + fmt(b) + ")");
    } else if (family == "beta_mean") {
        // Beta parameterized by (mean, concentration): alpha = m*k, beta = (1-m)*k.
        for (double m : parse_axis(gen, "mean"))
            for (double k : parse_axis(gen, "concentration"))
                out.emplace_back(BetaParams{m * k, (1.0 - m) * k},
                                 "beta_mean(" + fmt(m) + "," + fmt(k) + ")");
    } else if (family == "truncated_normal") {
        for (double loc : parse_axis(gen, "loc"))
            for (double scale : parse_axis(gen, "scale"))
                out.emplace_back(TruncatedNormalParams{loc, scale},
                                 "tnorm(" + fmt(loc) + "," + fmt(scale) + ")");
    } else if (family == "bernoulli") {
        for (double p : parse_axis(gen, "p"))
            out.emplace_back(BernoulliParams{p}, "bern(" + fmt(p) + ")");
    } else if (family == "uniform_spike") {
        for (double c : parse_axis(gen, "center"))
            for (double h : parse_axis(gen, "halfwidth"))
                for (double m : parse_axis(gen, "mass"))
                    out.emplace_back(UniformSpikeParams{c, h, m},
                                     "spike(" + fmt(c) + "," + fmt(h) + "," + fmt(m) + ")");
    } else {
        throw ConfigError("unknown generator family '" + family + "'");
    }
}

}  // namespace

DistributionSpec spec_from_json(const json& entry) {
    const std::string family = entry.value("family", "");
    std::string label = entry.value("label", "");

    FamilyParams params;
    if (family == "beta") {
        params = BetaParams{get_number(entry, "a"), get_number(entry, "b")};
        if (label.empty())
            label = "beta(" + fmt(get_number(entry, "a")) + "," + fmt(get_number(entry, "b")) + ")";
    } else if (family == "truncated_normal") {
        const double loc = get_number(entry, "loc");
        const double scale = get_number(entry, "scale");
        params = TruncatedNormalParams{loc, scale};
        if (label.empty()) label = "tnorm(" + fmt(loc) + "," + fmt(scale) + ")";
    } else if (family == "gaussian_mixture") {
        GaussianMixtureParams mix;
        if (!entry.contains("components") || !entry.at("components").is_array())
            throw ConfigError("gaussian_mixture needs a 'components' array");
        for (const json& c : entry.at("components"))
            mix.components.push_back(
                {get_number(c, "weight"), get_number(c, "loc"), get_number(c, "scale")});
        params = std::move(mix);
        if (label.empty()) label = "gmix(" + std::to_string(entry.at("components").size()) + ")";
    } else if (family == "bernoulli") {
        params = BernoulliParams{get_number(entry, "p")};
        if (label.empty()) label = "bern(" + fmt(get_number(entry, "p")) + ")";
    } else if (family == "bimodal") {
        if (!entry.contains("first") || !entry.contains("second"))
            throw ConfigError("bimodal needs 'first' and 'second' beta components");
        BimodalParams bi;
        bi.first_weight = get_number(entry, "first_weight");
        bi.first = {get_number(entry.at("first"), "a"), get_number(entry.at("first"), "b")};
        bi.second = {get_number(entry.at("second"), "a"), get_number(entry.at("second"), "b")};
        params = bi;
        if (label.empty()) label = "bimodal(" + fmt(bi.first_weight) + ")";
    } else if (family == "uniform_spike") {
        const double c = get_number(entry, "center");
        const double h = get_number(entry, "halfwidth");
        const double m = get_number(entry, "mass");
        params = UniformSpikeParams{c, h, m};
        if (label.empty()) label = "spike(" + fmt(c) + "," + fmt(h) + "," + fmt(m) + ")";
    } else {
        throw ConfigError("unknown distribution family '" + family + "'");
    }
    return DistributionSpec(std::move(params), std::move(label));
}

std::vector<DistributionSpec> make_bank(const json& config) {
    std::vector<DistributionSpec> bank;
    if (config.contains("explicit")) {
        for (const json& entry : config.at("explicit")) bank.push_back(spec_from_json(entry));
    }
    if (config.contains("generators")) {
        for (const json& gen : config.at("generators")) append_generated(gen, bank);
    }
    if (config.contains("mean_range")) {
        const auto range = config.at("mean_range").get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError("mean_range must be [lo, hi]");
        std::vector<DistributionSpec> kept;
        for (auto& spec : bank) {
            const double mean = moments(spec).mean;
            if (mean >= range[0] && mean <= range[1]) kept.push_back(std::move(spec));
        }
        bank = std::move(kept);
    }
    if (bank.empty()) throw ConfigError("bank '" + config.value("name", "?") + "' is empty");

    std::set<std::string> seen;
    for (const auto& spec : bank)
        if (!seen.insert(spec.label()).second)
            throw ConfigError("duplicate label in bank: " + spec.label());
    return bank;
}

}  // namespace betwise
