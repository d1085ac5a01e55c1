#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trafficrl/adaptive.hpp"
#include "trafficrl/agent.hpp"
#include "trafficrl/trace.hpp"

namespace trafficrl {

// Everything one experiment needs: the network plus the per-module knobs the
// scenario file carries alongside it.
struct RunConfig {
    Scenario scenario;
    RewardParams reward;
    UncertaintyConfig uncertainty;
    AgentParams agent;
    StateEncoder encoder;
    HorizonParams horizon;
    NetworkState initial_state;  // default: 20 vehicles on every road

    void validate() const;
    nlohmann::json to_json() const;  // fully resolved, for run_meta.json
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
};

struct RegularResult {
    RunTrace trace;
    QTable qtable;
    std::vector<JointAction> actions;
    TrainStats stats;
};

// Trains on the full fixed grid (no contraction), then rolls out greedily.
RegularResult run_regular(const RunConfig& config, std::uint64_t seed);

struct AdaptiveRunResult {
    RunTrace trace;
    AdaptiveResult adaptive;
};

AdaptiveRunResult run_adaptive(const RunConfig& config, std::uint64_t seed);

// Applies the same joint action every step.
RunTrace run_fixed_time(const RunConfig& config, const JointAction& greens,
                        std::uint64_t seed);

enum class OracleMode { fixed_action, action_sequence };

struct OracleResult {
    std::vector<JointAction> best_actions;  // length 1 or horizon
    double best_cost = 0.0;
    std::vector<JointAction> worst_actions;
    double worst_cost = 0.0;
    bool best_overflow = false;   // best trajectory hit a capacity anywhere
    bool worst_overflow = false;
    std::uint64_t evaluated = 0;
};

// Exhaustive minimum total cost over `actions`, either one action held for
// the whole horizon or all action sequences. Requires a deterministic
// config (all variances zero) and refuses when the enumeration would exceed
// `budget` rollouts.
OracleResult oracle_search(const RunConfig& config, const std::vector<JointAction>& actions,
                           int horizon, OracleMode mode, std::uint64_t budget = 2'000'000);

enum class SweepAxis { demand, turning };

struct SweepRow {
    double pct = 0.0;
    std::vector<double> step_mean_cost;  // per step, mean over seeds
    double overflow_frac = 0.0;          // fraction of seeds with any overflow
    int seeds = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::demand;
    std::vector<SweepRow> rows;
};

// Greedy controller: a trained table plus its action list.
struct Controller {
    QTable qtable;
    std::vector<JointAction> actions;
    StateEncoder encoder;
};

// For each pct and seed: greedy rollout under uncertainty on the given axis
// only (the other axis is held at zero), aggregating per-step mean cost and
// the fraction of seeds that overflowed anywhere.
SweepResult sweep_uncertainty(const RunConfig& config, const Controller& controller,
                              SweepAxis axis, const std::vector<double>& pct_list,
                              int n_seeds, std::uint64_t seed);

// CSV / JSON emission. Writers produce byte-stable output for fixed inputs;
// readers parse what the writers emit (round-trip checked in tests).
void write_trace_csv(const std::string& path, const Scenario& scenario,
                     const RunTrace& trace);
RunTrace read_trace_csv(const std::string& path, const Scenario& scenario);
void write_sweep_csv(const std::string& path, const SweepResult& result);
SweepResult read_sweep_csv(const std::string& path);
void write_generations_csv(const std::string& path, const GenerationLog& log);
GenerationLog read_generations_csv(const std::string& path);
void write_run_meta(const std::string& path, const RunConfig& config, std::uint64_t seed,
                    const nlohmann::json& extra = {});

// CLI entry point (simulate / sweep / oracle). Exposed so tests can drive
// the full command path in-process.
int cli_main(int argc, const char* const* argv);

}  // namespace trafficrl
