#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "betwise/distributions.hpp"

namespace betwise {

struct MethodSpec {
    enum class Kind { MonteCarlo, IdealKelly, ApproxKelly, OptimalIs };
    Kind kind = Kind::MonteCarlo;
    std::string bank;             // approx-kelly: which sim bank drives the mixture
    std::vector<double> lambdas;  // empty -> lambda_grid (ideal) or {1.0} (approx)
    std::vector<double> etas;     // empty -> eta_grid (approx only)
};

struct TraceSelector {
    std::string task;
    std::string method;
    int rounds = 0;
    int seed = 0;
};

enum class ExpertMode { Analytic, SampleSet };

struct ExperimentConfig {
    std::vector<DistributionSpec> real_bank;
    std::vector<std::pair<std::string, std::vector<DistributionSpec>>> sim_banks;
    std::vector<MethodSpec> methods;

    std::vector<double> eta_grid{0.5, 5.0, 50.0};
    std::vector<int> t_grid{30, 300};
    std::vector<double> lambda_grid{1.0, 0.5};

    int seed_count = 100;
    std::uint64_t base_seed = 20250601;

    double tau0 = 0.5;
    double stake_floor = 1e-3;
    double variance_floor = 1e-6;
    double evalue_alpha = 0.05;

    ExpertMode expert_mode = ExpertMode::Analytic;
    int expert_n_sim = 5;

    std::string output_dir = "out";
    std::vector<TraceSelector> wealth_traces;

    nlohmann::json source;  // parsed document, echoed into meta.json
};

ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a config file; errors name the offending path.
ExperimentConfig load_config(const std::string& path);

/// Shipped desk-scale default: six-target real bank, coverage/mid/biased sim
/// banks, eta in {0.5, 5, 50}, T in {30, 300}, 100 seeds.
const char* default_config_json();
ExperimentConfig default_config();

}  // namespace betwise
