#include "betwise/cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betwise/config.hpp"
#include "betwise/diagnostics.hpp"
#include "betwise/errors.hpp"
#include "betwise/runner.hpp"

namespace betwise {

namespace {

ExperimentConfig config_from(const std::string& path) {
    return path.empty() ? default_config() : load_config(path);
}

int cmd_run(const std::string& config_path, const std::string& output_override) {
    ExperimentConfig config = config_from(config_path);
    if (!output_override.empty()) config.output_dir = output_override;

    const ExperimentResult result = run_experiment(config);
    const std::vector<WinRateCell> cells = win_rates(result.records);
    emit_results(result, cells, config, config.output_dir);

    std::printf("wrote %zu runs, %zu win-rate cells to %s (%.2fs, %u threads)\n",
                result.records.size(), cells.size(), config.output_dir.c_str(),
                result.wall_clock_seconds, result.threads);
    return 0;
}

int cmd_trace(const std::string& config_path, const std::string& task, const std::string& method,
              double eta, int rounds, int seed) {
    const ExperimentConfig config = config_from(config_path);
    const int effective_rounds = rounds > 0 ? rounds : config.t_grid.back();
    const SingleRun run = run_single(config, task, method, eta, effective_rounds, seed);

    std::printf("round,stake,raw_stake,direction,outcome,payoff,tau,wealth\n");
    for (const auto& row : run.rounds)
        std::printf("%d,%.12g,%.12g,%d,%.12g,%.12g,%.12g,%.12g\n", row.round, row.stake,
                    row.raw_stake, row.direction, row.outcome, row.payoff, row.tau, row.wealth);
    std::fprintf(stderr, "estimate=%.12g abs_error=%.12g final_wealth=%.12g\n",
                 run.record.estimate, run.record.abs_error, run.record.final_wealth);
    return 0;
}

int cmd_null_check(double alpha, int reps, int rounds, double stake, std::uint64_t seed) {
    RandomStream stream = StreamKey::root(seed).with("null-check").stream();
    const NullSimulationReport report =
        null_exceedance_simulation(rounds, stake, alpha, reps, stream);
    std::printf("null exceedance simulation: T=%d stake=%g alpha=%g replications=%d\n",
                report.rounds, report.stake, report.alpha, report.replications);
    std::printf("empirical rate P(W_T >= %g) = %.6g, bound alpha + 3*sqrt(alpha(1-alpha)/n) = %.6g\n",
                report.threshold, report.exceedance_rate, report.bound);
    std::printf("%s\n", report.exceedance_rate <= report.bound
                            ? "within bound"
                            : "EXCEEDS bound (inconsistent with the no-edge null)");
    return report.exceedance_rate <= report.bound ? 0 : 1;
}

int cmd_banks(const std::string& config_path) {
    const ExperimentConfig config = config_from(config_path);
    std::printf("real bank (%zu targets):\n", config.real_bank.size());
    for (const auto& spec : config.real_bank) {
        const Moments m = moments(spec);
        std::printf("  %-24s %-18s mean=%.6g variance=%.6g\n", spec.label().c_str(),
                    family_name(spec), m.mean, m.variance);
    }
    std::printf("sim banks (%zu):\n", config.sim_banks.size());
    for (const auto& [name, specs] : config.sim_banks)
        std::printf("  %-24s %zu experts\n", name.c_str(), specs.size());
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"betwise: betting-based sequential mean estimation harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    auto* run = app.add_subcommand("run", "execute the configured experiment grid");
    run->add_option("--config", config_path, "experiment config JSON (defaults to the built-in)");
    run->add_option("--output", output_override, "override the configured output directory");

    std::string trace_task, trace_method;
    double trace_eta = std::numeric_limits<double>::quiet_NaN();
    int trace_rounds = 0;
    int trace_seed = 0;
    auto* trace = app.add_subcommand("trace", "print the round-by-round trace of a single run");
    trace->add_option("--config", config_path, "experiment config JSON");
    trace->add_option("--task", trace_task, "task label from the real bank")->required();
    trace->add_option("--method", trace_method, "method label, e.g. mc or ideal-kelly@1")
        ->required();
    trace->add_option("--eta", trace_eta, "eta instance for approx-kelly (default: first in grid)");
    trace->add_option("--T", trace_rounds, "round count (default: last t_grid entry)");
    trace->add_option("--seed", trace_seed, "seed index");

    double alpha = 0.05;
    int reps = 2000;
    int null_rounds = 300;
    double stake = 0.5;
    std::uint64_t null_seed = 7;
    auto* null_check = app.add_subcommand("null-check", "verify the wealth bound under a no-edge null");
    null_check->add_option("--alpha", alpha, "level in (0,1)")->required();
    null_check->add_option("--reps", reps, "number of replications")->required();
    null_check->add_option("--T", null_rounds, "rounds per replication");
    null_check->add_option("--stake", stake, "constant stake in [0,1]");
    null_check->add_option("--seed", null_seed, "simulation seed");

    bool list_banks = false;
    auto* banks = app.add_subcommand("banks", "show configured real targets and sim banks");
    banks->add_flag("--list", list_banks, "list bank contents");
    banks->add_option("--config", config_path, "experiment config JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, output_override);
        if (trace->parsed())
            return cmd_trace(config_path, trace_task, trace_method, trace_eta, trace_rounds,
                             trace_seed);
        if (null_check->parsed()) return cmd_null_check(alpha, reps, null_rounds, stake, null_seed);
        if (banks->parsed()) return cmd_banks(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

}  // namespace betwise
