#include "betwise/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "betwise/banks.hpp"
#include "betwise/errors.hpp"
#include "betwise/strategies.hpp"

namespace betwise {

namespace {

using nlohmann::json;

MethodSpec parse_method(const json& j) {
    MethodSpec method;
    const std::string kind = j.value("kind", "");
    if (kind == "mc") {
        method.kind = MethodSpec::Kind::MonteCarlo;
    } else if (kind == "ideal-kelly") {
        method.kind = MethodSpec::Kind::IdealKelly;
    } else if (kind == "approx-kelly") {
        method.kind = MethodSpec::Kind::ApproxKelly;
        method.bank = j.value("bank", "");
        if (method.bank.empty()) throw ConfigError("approx-kelly method needs a 'bank' name");
    } else if (kind == "optimal-is") {
        method.kind = MethodSpec::Kind::OptimalIs;
    } else {
        throw ConfigError("unknown method kind '" + kind + "' (use mc, ideal-kelly, approx-kelly, optimal-is)");
    }
    if (j.contains("lambdas")) method.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("etas")) method.etas = j.at("etas").get<std::vector<double>>();
    return method;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig config;
    config.source = doc;

    if (doc.contains("seeds")) {
        config.seed_count = doc.at("seeds").value("count", config.seed_count);
        config.base_seed = doc.at("seeds").value("base", config.base_seed);
    }
    if (doc.contains("t_grid")) config.t_grid = doc.at("t_grid").get<std::vector<int>>();
    if (doc.contains("eta_grid")) config.eta_grid = doc.at("eta_grid").get<std::vector<double>>();
    if (doc.contains("lambda_grid"))
        config.lambda_grid = doc.at("lambda_grid").get<std::vector<double>>();
    config.tau0 = doc.value("tau0", config.tau0);
    config.stake_floor = doc.value("stake_floor", config.stake_floor);
    config.variance_floor = doc.value("variance_floor", config.variance_floor);
    config.evalue_alpha = doc.value("evalue_alpha", config.evalue_alpha);
    config.output_dir = doc.value("output", config.output_dir);
    config.expert_n_sim = doc.value("expert_n_sim", config.expert_n_sim);

    const std::string mode = doc.value("expert_mode", "analytic");
    if (mode == "analytic") {
        config.expert_mode = ExpertMode::Analytic;
    } else if (mode == "samples") {
        config.expert_mode = ExpertMode::SampleSet;
    } else {
        throw ConfigError("expert_mode must be 'analytic' or 'samples'");
    }

    if (!doc.contains("real_bank")) throw ConfigError("config needs a 'real_bank'");
    config.real_bank = make_bank(doc.at("real_bank"));

    if (doc.contains("sim_banks")) {
        for (const json& bank : doc.at("sim_banks")) {
            const std::string name = bank.value("name", "");
            if (name.empty()) throw ConfigError("every sim bank needs a 'name'");
            config.sim_banks.emplace_back(name, make_bank(bank));
        }
    }

    if (doc.contains("methods"))
        for (const json& m : doc.at("methods")) config.methods.push_back(parse_method(m));
    if (config.methods.empty()) config.methods.push_back({MethodSpec::Kind::MonteCarlo, "", {}, {}});

    if (doc.contains("wealth_traces")) {
        for (const json& t : doc.at("wealth_traces")) {
            TraceSelector sel;
            sel.task = t.value("task", "");
            sel.method = t.value("method", "");
            sel.rounds = t.value("T", 0);
            sel.seed = t.value("seed", 0);
            config.wealth_traces.push_back(std::move(sel));
        }
    }

    // Cross-checks: grids populated, names resolvable, parameters valid.
    if (config.seed_count < 1) throw ConfigError("seeds.count must be >= 1");
    if (config.t_grid.empty()) throw ConfigError("t_grid must be non-empty");
    for (int t : config.t_grid)
        if (t < 1) throw ConfigError("every T in t_grid must be >= 1");
    if (config.eta_grid.empty()) throw ConfigError("eta_grid must be non-empty");
    for (double eta : config.eta_grid)
        if (!(eta >= 0.0)) throw ConfigError("every eta must be >= 0");
    if (config.lambda_grid.empty()) throw ConfigError("lambda_grid must be non-empty");
    if (!(config.tau0 >= 0.0 && config.tau0 <= 1.0)) throw ConfigError("tau0 must be in [0,1]");

    KellyParams probe{1.0, config.stake_floor, config.variance_floor};
    validate(probe);

    std::set<std::string> bank_names;
    for (const auto& [name, specs] : config.sim_banks) {
        if (!bank_names.insert(name).second) throw ConfigError("duplicate sim bank name: " + name);
        (void)specs;
    }
    std::set<std::string> task_labels;
    for (const auto& spec : config.real_bank)
        if (!task_labels.insert(spec.label()).second)
            throw ConfigError("duplicate task label in real bank: " + spec.label());

    for (const auto& method : config.methods) {
        for (double l : method.lambdas) validate(KellyParams{l, config.stake_floor, config.variance_floor});
        if (method.kind == MethodSpec::Kind::ApproxKelly && !bank_names.count(method.bank))
            throw ConfigError("approx-kelly references unknown sim bank '" + method.bank + "'");
    }
    for (double l : config.lambda_grid)
        validate(KellyParams{l, config.stake_floor, config.variance_floor});

    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse config file " + path + ": " + e.what());
    }
    try {
        return parse_config(doc);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

const char* default_config_json() {
    return R"json({
  "seeds": {"count": 100, "base": 20250601},
  "t_grid": [30, 300],
  "eta_grid": [0.5, 5.0, 50.0],
  "lambda_grid": [1.0, 0.5],
  "tau0": 0.5,
  "stake_floor": 0.001,
  "variance_floor": 1e-06,
  "evalue_alpha": 0.05,
  "output": "out",
  "expert_mode": "analytic",
  "expert_n_sim": 5,
  "real_bank": {
    "name": "real_six",
    "explicit": [
      {"family": "beta", "a": 1.4, "b": 2.6, "label": "beta_low"},
      {"family": "uniform_spike", "center": 0.42, "halfwidth": 0.13, "mass": 0.625, "label": "spike_mid"},
      {"family": "bimodal", "first_weight": 0.625, "first": {"a": 7, "b": 3}, "second": {"a": 3, "b": 7}, "label": "bimodal_mid"},
      {"family": "truncated_normal", "loc": 0.6715147542619907, "scale": 0.2, "label": "tnorm_high"},
      {"family": "gaussian_mixture", "components": [
        {"weight": 0.5, "loc": 0.18, "scale": 0.07},
        {"weight": 0.5, "loc": 0.62, "scale": 0.11}
      ], "label": "gmix_two"},
      {"family": "beta", "a": 1.8, "b": 4.2, "label": "beta_skew"}
    ]
  },
  "sim_banks": [
    {
      "name": "sim_coverage_170",
      "generators": [
        {"family": "beta_mean",
         "mean": {"linspace": {"start": 0.05, "stop": 0.95, "count": 10}},
         "concentration": {"geomspace": {"start": 0.5, "stop": 100.0, "count": 17}}}
      ]
    },
    {
      "name": "sim_mid_35",
      "generators": [
        {"family": "beta_mean",
         "mean": {"values": [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95]},
         "concentration": {"geomspace": {"start": 1.0, "stop": 60.0, "count": 5}}}
      ]
    },
    {
      "name": "sim_biased_18",
      "generators": [
        {"family": "beta_mean",
         "mean": {"values": [0.05, 0.15, 0.25]},
         "concentration": {"geomspace": {"start": 1.0, "stop": 50.0, "count": 6}}}
      ],
      "mean_range": [0.0, 0.3]
    }
  ],
  "methods": [
    {"kind": "mc"},
    {"kind": "ideal-kelly"},
    {"kind": "approx-kelly", "bank": "sim_coverage_170"},
    {"kind": "approx-kelly", "bank": "sim_mid_35"},
    {"kind": "approx-kelly", "bank": "sim_biased_18"},
    {"kind": "optimal-is"}
  ],
  "wealth_traces": [
    {"task": "beta_low", "method": "ideal-kelly@1", "T": 300, "seed": 0},
    {"task": "beta_low", "method": "approx-kelly:sim_coverage_170@1", "T": 300, "seed": 0},
    {"task": "beta_low", "method": "mc", "T": 300, "seed": 0}
  ]
})json";
}

ExperimentConfig default_config() { return parse_config(json::parse(default_config_json())); }

}  // namespace betwise
