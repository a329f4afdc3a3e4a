#include "betwise/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "betwise/diagnostics.hpp"
#include "betwise/errors.hpp"
#include "betwise/experts.hpp"
#include "betwise/importance.hpp"
#include "betwise/strategies.hpp"

namespace betwise {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// A single expanded method column: kind + fixed (eta, lambda) + bank.
struct MethodInstance {
    MethodSpec::Kind kind;
    std::string label;
    std::string bank_name;
    const std::vector<DistributionSpec>* bank = nullptr;
    double eta = kNaN;
    double lambda = kNaN;
};

struct RunDescriptor {
    std::size_t task_index;
    std::size_t method_index;
    int rounds;
    int seed;
    bool traced;
};

struct Plan {
    std::vector<MethodInstance> methods;
    std::vector<RunDescriptor> runs;
};

const std::vector<DistributionSpec>* find_bank(const ExperimentConfig& config,
                                               const std::string& name) {
    for (const auto& [bank_name, specs] : config.sim_banks)
        if (bank_name == name) return &specs;
    throw ConfigError("unknown sim bank '" + name + "'");
}

std::vector<MethodInstance> expand_methods(const ExperimentConfig& config) {
    std::vector<MethodInstance> instances;
    bool have_mc = false;
    for (const auto& method : config.methods) {
        switch (method.kind) {
            case MethodSpec::Kind::MonteCarlo: {
                if (have_mc) break;
                have_mc = true;
                instances.push_back({method.kind, "mc", "", nullptr, kNaN, kNaN});
                break;
            }
            case MethodSpec::Kind::IdealKelly: {
                const auto& lambdas = method.lambdas.empty() ? config.lambda_grid : method.lambdas;
                for (double l : lambdas)
                    instances.push_back({method.kind, method_label(method.kind, "", l), "",
                                         nullptr, kNaN, l});
                break;
            }
            case MethodSpec::Kind::ApproxKelly: {
                const auto* bank = find_bank(config, method.bank);
                const std::vector<double> default_lambda{1.0};
                const auto& lambdas = method.lambdas.empty() ? default_lambda : method.lambdas;
                const auto& etas = method.etas.empty() ? config.eta_grid : method.etas;
                for (double l : lambdas)
                    for (double eta : etas)
                        instances.push_back({method.kind,
                                             method_label(method.kind, method.bank, l),
                                             method.bank, bank, eta, l});
                break;
            }
            case MethodSpec::Kind::OptimalIs: {
                instances.push_back({method.kind, "optimal-is", "", nullptr, kNaN, kNaN});
                break;
            }
        }
    }
    // Win rates are paired against mc, so it always runs.
    if (!have_mc)
        instances.insert(instances.begin(), {MethodSpec::Kind::MonteCarlo, "mc", "", nullptr,
                                             kNaN, kNaN});
    return instances;
}

bool matches_trace(const ExperimentConfig& config, const std::string& task,
                   const std::string& method, int rounds, int seed) {
    for (const auto& sel : config.wealth_traces)
        if (sel.task == task && sel.method == method && sel.rounds == rounds && sel.seed == seed)
            return true;
    return false;
}

Plan build_plan(const ExperimentConfig& config) {
    Plan plan;
    plan.methods = expand_methods(config);
    for (std::size_t t = 0; t < config.real_bank.size(); ++t) {
        const DistributionSpec& task_spec = config.real_bank[t];
        for (std::size_t m = 0; m < plan.methods.size(); ++m) {
            // optimal-IS needs a density; discrete targets simply have no IS runs
            if (plan.methods[m].kind == MethodSpec::Kind::OptimalIs && !has_density(task_spec))
                continue;
            for (int rounds : config.t_grid) {
                for (int seed = 0; seed < config.seed_count; ++seed) {
                    const bool traced =
                        matches_trace(config, task_spec.label(), plan.methods[m].label, rounds, seed);
                    plan.runs.push_back({t, m, rounds, seed, traced});
                }
            }
        }
    }
    return plan;
}

// Per-round bet source; one instance per run.
class BetPolicy {
public:
    virtual ~BetPolicy() = default;
    virtual BetDecision decide(double tau_prev) = 0;
    virtual void observe(double /*outcome*/) {}
};

class MonteCarloPolicy final : public BetPolicy {
public:
    BetDecision decide(double) override { return mc_bet(); }
};

class IdealKellyPolicy final : public BetPolicy {
public:
    IdealKellyPolicy(Moments target, KellyParams params) : target_(target), params_(params) {}
    BetDecision decide(double tau_prev) override {
        return ideal_kelly_bet(target_.mean, target_.variance, tau_prev, params_);
    }

private:
    Moments target_;
    KellyParams params_;
};

class ApproxKellyPolicy final : public BetPolicy {
public:
    ApproxKellyPolicy(ExpertBank bank, KellyParams params, RandomStream sim_stream)
        : bank_(std::move(bank)), params_(params), sim_stream_(sim_stream) {}

    BetDecision decide(double tau_prev) override {
        if (bank_.refresh_each_round()) bank_.refresh(sim_stream_);
        const MixtureMoments mix = bank_.mixture_moments();
        return approx_kelly_bet(mix.m, mix.v, tau_prev, params_);
    }

    void observe(double outcome) override { bank_.update_scores(outcome); }

private:
    ExpertBank bank_;
    KellyParams params_;
    RandomStream sim_stream_;
};

struct RunContext {
    const ExperimentConfig& config;
    // expert templates per sim bank, built once and copied per run
    std::map<std::string, std::vector<Expert>> expert_templates;
    // optimal-IS proposals per task, built once (immutable, shared across runs)
    std::map<std::string, std::shared_ptr<const OptimalProposal>> proposals;
    std::vector<Moments> task_moments;
};

std::unique_ptr<BetPolicy> make_policy(const RunContext& ctx, const MethodInstance& method,
                                       const RunDescriptor& run, const std::string& task_label) {
    const ExperimentConfig& config = ctx.config;
    switch (method.kind) {
        case MethodSpec::Kind::MonteCarlo:
            return std::make_unique<MonteCarloPolicy>();
        case MethodSpec::Kind::IdealKelly: {
            KellyParams params{method.lambda, config.stake_floor, config.variance_floor};
            return std::make_unique<IdealKellyPolicy>(ctx.task_moments[run.task_index], params);
        }
        case MethodSpec::Kind::ApproxKelly: {
            KellyParams params{method.lambda, config.stake_floor, config.variance_floor};
            const bool per_round = config.expert_mode == ExpertMode::SampleSet;
            ExpertBank bank(ctx.expert_templates.at(method.bank_name), method.eta,
                            config.variance_floor, per_round);
            RandomStream sim = StreamKey::root(config.base_seed)
                                   .with("sim")
                                   .with(task_label)
                                   .with(static_cast<std::uint64_t>(run.seed))
                                   .with(method.label)
                                   .stream();
            return std::make_unique<ApproxKellyPolicy>(std::move(bank), params, sim);
        }
        default:
            throw Error("no betting policy for this method");
    }
}

struct RunOutput {
    RunRecord record;
    std::vector<RoundRow> rounds;          // filled only when tracing
    std::vector<double> wealth_trajectory; // filled only when traced for wealth.csv
};

RunOutput execute_run(const RunContext& ctx, const Plan& plan, const RunDescriptor& run,
                      bool collect_rounds) {
    const ExperimentConfig& config = ctx.config;
    const MethodInstance& method = plan.methods[run.method_index];
    const DistributionSpec& task = config.real_bank[run.task_index];
    const double mu_true = ctx.task_moments[run.task_index].mean;

    RunOutput out;
    RunRecord& rec = out.record;
    rec.task = task.label();
    rec.method = method.label;
    rec.eta = method.eta;
    rec.lambda = method.lambda;
    rec.rounds = run.rounds;
    rec.seed = run.seed;
    rec.evalue_alpha = config.evalue_alpha;
    rec.acceptance_rate = kNaN;
    rec.traced = run.traced;

    if (method.kind == MethodSpec::Kind::OptimalIs) {
        const OptimalProposal& proposal = *ctx.proposals.at(rec.task);
        RandomStream stream = StreamKey::root(config.base_seed)
                                  .with("is")
                                  .with(rec.task)
                                  .with(static_cast<std::uint64_t>(run.seed))
                                  .stream();
        std::vector<double> draws;
        draws.reserve(static_cast<std::size_t>(run.rounds));
        long proposals_used = 0;
        for (int t = 0; t < run.rounds; ++t)
            draws.push_back(rejection_sample(proposal, stream, 1'000'000, &proposals_used));
        rec.estimate = is_estimate(draws, proposal, /*self_normalized=*/true);
        rec.abs_error = std::fabs(rec.estimate - mu_true);
        rec.acceptance_rate = static_cast<double>(run.rounds) / static_cast<double>(proposals_used);
        rec.final_wealth = kNaN;
        rec.evalue_threshold = 1.0 / config.evalue_alpha;
        rec.evalue_exceeds = false;
        return out;
    }

    auto policy = make_policy(ctx, method, run, rec.task);
    RandomStream real_stream = StreamKey::root(config.base_seed)
                                   .with("real")
                                   .with(rec.task)
                                   .with(static_cast<std::uint64_t>(run.seed))
                                   .stream();
    Ledger ledger(config.tau0);
    WealthProcess wealth;
    const auto sampler = [&]() { return sample(task, real_stream); };

    for (int t = 1; t <= run.rounds; ++t) {
        const BetDecision bet = policy->decide(ledger.tau());
        const RoundOutcome round = run_round(bet, sampler, ledger, wealth);
        policy->observe(round.outcome);
        if (collect_rounds)
            out.rounds.push_back({t, bet.stake, bet.raw_stake, bet.direction, round.outcome,
                                  round.payoff, round.tau_after, round.wealth_after});
    }

    rec.estimate = bet_weighted_estimate(ledger);
    rec.abs_error = std::fabs(rec.estimate - mu_true);
    rec.final_wealth = wealth.current();
    const EValueReport evalue = evalue_check(wealth, config.evalue_alpha);
    rec.evalue_threshold = evalue.threshold;
    rec.evalue_exceeds = evalue.exceeds;
    if (run.traced) out.wealth_trajectory = wealth.trajectory();
    return out;
}

RunContext build_context(const ExperimentConfig& config, const Plan& plan) {
    RunContext ctx{config, {}, {}, {}};
    ctx.task_moments.reserve(config.real_bank.size());
    for (const auto& task : config.real_bank) ctx.task_moments.push_back(moments(task));

    std::set<std::size_t> is_tasks;
    std::set<std::size_t> bank_methods;
    for (const auto& run : plan.runs) {
        if (plan.methods[run.method_index].kind == MethodSpec::Kind::OptimalIs)
            is_tasks.insert(run.task_index);
        if (plan.methods[run.method_index].kind == MethodSpec::Kind::ApproxKelly)
            bank_methods.insert(run.method_index);
    }

    for (std::size_t m : bank_methods) {
        const MethodInstance& method = plan.methods[m];
        if (ctx.expert_templates.count(method.bank_name)) continue;
        std::vector<Expert> experts;
        experts.reserve(method.bank->size());
        for (const auto& spec : *method.bank)
            experts.push_back(config.expert_mode == ExpertMode::Analytic
                                  ? make_analytic_expert(spec, config.variance_floor)
                                  : make_sample_expert(spec, config.expert_n_sim,
                                                       config.variance_floor));
        ctx.expert_templates.emplace(method.bank_name, std::move(experts));
    }
    for (std::size_t t : is_tasks)
        ctx.proposals.emplace(
            config.real_bank[t].label(),
            std::make_shared<const OptimalProposal>(build_optimal_proposal(config.real_bank[t])));
    return ctx;
}

unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("BETWISE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(jobs, 1))));
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write output file: " + path.string());
    out << content;
    if (!out) throw Error("write failed for output file: " + path.string());
}

}  // namespace

std::string method_label(const MethodSpec::Kind kind, const std::string& bank, double lambda) {
    switch (kind) {
        case MethodSpec::Kind::MonteCarlo:
            return "mc";
        case MethodSpec::Kind::IdealKelly:
            return "ideal-kelly@" + fmt_g(lambda);
        case MethodSpec::Kind::ApproxKelly:
            return "approx-kelly:" + bank + "@" + fmt_g(lambda);
        case MethodSpec::Kind::OptimalIs:
            return "optimal-is";
    }
    return "?";
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const Plan plan = build_plan(config);
    const RunContext ctx = build_context(config, plan);

    std::vector<RunOutput> outputs(plan.runs.size());
    const unsigned workers = worker_count(plan.runs.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t index = cursor.fetch_add(1);
            if (index >= plan.runs.size()) return;
            try {
                outputs[index] = execute_run(ctx, plan, plan.runs[index], /*collect_rounds=*/false);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    result.threads = workers;
    result.records.reserve(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        result.records.push_back(std::move(outputs[i].record));
        if (!outputs[i].wealth_trajectory.empty()) {
            const RunRecord& rec = result.records.back();
            result.wealth_traces.push_back({rec.task, rec.method, rec.eta, rec.lambda, rec.rounds,
                                            rec.seed, std::move(outputs[i].wealth_trajectory)});
        }
    }
    result.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<WinRateCell> win_rates(const std::vector<RunRecord>& records) {
    // mc errors keyed by (task, T, seed)
    std::map<std::tuple<std::string, int, int>, double> mc_error;
    for (const auto& rec : records)
        if (rec.method == "mc") mc_error[{rec.task, rec.rounds, rec.seed}] = rec.abs_error;

    struct Tally {
        int wins = 0;
        int total = 0;
        double eta = kNaN;
    };
    // NaN is not usable as an ordered map key; encode "no eta" as -1 (eta >= 0 otherwise).
    const auto eta_key = [](double eta) { return std::isnan(eta) ? -1.0 : eta; };
    using Key = std::tuple<std::string, std::string, double, int>;
    std::map<Key, Tally> cells;
    std::vector<Key> order;
    for (const auto& rec : records) {
        if (rec.method == "mc") continue;
        const auto partner = mc_error.find({rec.task, rec.rounds, rec.seed});
        if (partner == mc_error.end())
            throw Error("missing paired mc run for task " + rec.task + " T=" +
                        std::to_string(rec.rounds) + " seed=" + std::to_string(rec.seed));
        const Key key{rec.method, rec.task, eta_key(rec.eta), rec.rounds};
        auto it = cells.find(key);
        if (it == cells.end()) {
            it = cells.emplace(key, Tally{}).first;
            it->second.eta = rec.eta;
            order.push_back(key);
        }
        it->second.total += 1;
        if (rec.abs_error < partner->second) it->second.wins += 1;  // ties are losses
    }

    std::vector<WinRateCell> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        const Tally& tally = cells.at(key);
        WinRateCell cell;
        cell.method = std::get<0>(key);
        cell.task = std::get<1>(key);
        cell.eta = tally.eta;
        cell.rounds = std::get<3>(key);
        cell.win_rate = static_cast<double>(tally.wins) / tally.total;
        cell.n_seeds = tally.total;
        out.push_back(std::move(cell));
    }
    return out;
}

void emit_results(const ExperimentResult& result, const std::vector<WinRateCell>& cells,
                  const ExperimentConfig& config, const std::string& output_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory: " + dir.string());

    std::string runs;
    runs += "task,method,eta,lambda,T,seed,estimate,abs_error,final_wealth,acceptance_rate,"
            "evalue_alpha,evalue_threshold,evalue_exceeds,trace\n";
    for (const auto& r : result.records) {
        runs += r.task + ',' + r.method + ',' + csv_number(r.eta) + ',' + csv_number(r.lambda) +
                ',' + std::to_string(r.rounds) + ',' + std::to_string(r.seed) + ',' +
                csv_number(r.estimate) + ',' + csv_number(r.abs_error) + ',' +
                csv_number(r.final_wealth) + ',' + csv_number(r.acceptance_rate) + ',' +
                csv_number(r.evalue_alpha) + ',' + csv_number(r.evalue_threshold) + ',' +
                (r.evalue_exceeds ? "1" : "0") + ',' + (r.traced ? "wealth" : "") + '\n';
    }
    write_file_or_throw(dir / "runs.csv", runs);

    std::string rates;
    rates += "method,task,eta,T,win_rate,n_seeds\n";
    for (const auto& c : cells)
        rates += c.method + ',' + c.task + ',' + csv_number(c.eta) + ',' +
                 std::to_string(c.rounds) + ',' + csv_number(c.win_rate) + ',' +
                 std::to_string(c.n_seeds) + '\n';
    write_file_or_throw(dir / "winrates.csv", rates);

    std::string wealth;
    wealth += "task,method,eta,lambda,T,seed,round,wealth\n";
    for (const auto& trace : result.wealth_traces) {
        for (std::size_t i = 0; i < trace.trajectory.size(); ++i)
            wealth += trace.task + ',' + trace.method + ',' + csv_number(trace.eta) + ',' +
                      csv_number(trace.lambda) + ',' + std::to_string(trace.rounds) + ',' +
                      std::to_string(trace.seed) + ',' + std::to_string(i) + ',' +
                      csv_number(trace.trajectory[i]) + '\n';
    }
    write_file_or_throw(dir / "wealth.csv", wealth);

    nlohmann::json meta;
    meta["artifact"] = "betwise";
    meta["version"] = "0.1.0";
    meta["wall_clock_seconds"] = result.wall_clock_seconds;
    meta["threads"] = result.threads;
    meta["run_count"] = result.records.size();
    const auto now = std::chrono::system_clock::now();
    meta["generated_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    meta["config"] = config.source;
    write_file_or_throw(dir / "meta.json", meta.dump(2) + "\n");
}

SingleRun run_single(const ExperimentConfig& config, const std::string& task,
                     const std::string& method, double eta, int rounds, int seed) {
    Plan plan;
    plan.methods = expand_methods(config);

    std::size_t task_index = config.real_bank.size();
    for (std::size_t i = 0; i < config.real_bank.size(); ++i)
        if (config.real_bank[i].label() == task) task_index = i;
    if (task_index == config.real_bank.size()) throw ConfigError("unknown task label: " + task);

    std::size_t method_index = plan.methods.size();
    for (std::size_t i = 0; i < plan.methods.size(); ++i) {
        if (plan.methods[i].label != method) continue;
        if (!std::isnan(plan.methods[i].eta) && !std::isnan(eta) &&
            plan.methods[i].eta != eta)
            continue;
        method_index = i;
        break;
    }
    if (method_index == plan.methods.size())
        throw ConfigError("unknown method label: " + method +
                          " (check `betwise banks` and runs.csv for labels)");

    // narrow the context to just what this run needs
    Plan narrow;
    narrow.methods = plan.methods;
    const RunDescriptor descriptor{task_index, method_index, rounds, seed, true};
    narrow.runs.push_back(descriptor);
    const RunContext ctx = build_context(config, narrow);

    RunOutput out = execute_run(ctx, narrow, descriptor, /*collect_rounds=*/true);
    return {std::move(out.record), std::move(out.rounds)};
}

}  // namespace betwise
