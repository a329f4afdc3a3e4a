#pragma once

#include <string>
#include <vector>

#include "betwise/config.hpp"

namespace betwise {

/// One finished run of a method on a task at a given (T, seed).
/// eta/lambda/acceptance_rate are NaN when the method has no such knob.
struct RunRecord {
    std::string task;
    std::string method;  // label; lambda folded in, eta kept as its own column
    double eta = 0.0;
    double lambda = 0.0;
    int rounds = 0;
    int seed = 0;
    double estimate = 0.0;
    double abs_error = 0.0;
    double final_wealth = 0.0;
    double acceptance_rate = 0.0;  // optimal-is only
    double evalue_alpha = 0.05;
    double evalue_threshold = 20.0;
    bool evalue_exceeds = false;
    bool traced = false;
};

struct WinRateCell {
    std::string method;
    std::string task;
    double eta = 0.0;  // NaN when the method has no eta
    int rounds = 0;
    double win_rate = 0.0;
    int n_seeds = 0;
};

struct RoundRow {
    int round = 0;
    double stake = 0.0;
    double raw_stake = 0.0;
    int direction = +1;
    double outcome = 0.0;
    double payoff = 0.0;
    double tau = 0.0;
    double wealth = 0.0;
};

struct WealthTraceRow {
    std::string task;
    std::string method;
    double eta = 0.0;
    double lambda = 0.0;
    int rounds = 0;
    int seed = 0;
    std::vector<double> trajectory;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<WealthTraceRow> wealth_traces;
    double wall_clock_seconds = 0.0;
    unsigned threads = 1;
};

std::string method_label(const MethodSpec::Kind kind, const std::string& bank, double lambda);

/// Executes the full (task x method x eta x lambda x T x seed) grid. Real
/// outcomes for a given (task, seed) come from a stream keyed only by
/// (base seed, task, seed), so every method is paired against the same draws.
/// Output order and content are independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Paired strict-win rates against the mc records; ties count as losses.
/// Throws if a non-mc record has no mc partner with identical (task, T, seed).
std::vector<WinRateCell> win_rates(const std::vector<RunRecord>& records);

/// Writes runs.csv, winrates.csv, wealth.csv and meta.json under output_dir.
/// The CSVs are byte-stable across reruns; volatile facts (timestamps, host,
/// wall clock) live only in meta.json.
void emit_results(const ExperimentResult& result, const std::vector<WinRateCell>& cells,
                  const ExperimentConfig& config, const std::string& output_dir);

/// Runs one (task, method, T, seed) combination with a full per-round trace.
/// `method` is a method label as found in runs.csv; eta must single out the
/// instance when the method carries an eta grid.
struct SingleRun {
    RunRecord record;
    std::vector<RoundRow> rounds;
};
SingleRun run_single(const ExperimentConfig& config, const std::string& task,
                     const std::string& method, double eta, int rounds, int seed);

}  // namespace betwise
