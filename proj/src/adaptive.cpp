#include "trafficrl/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trafficrl {

void HorizonParams::validate() const {
    if (rounds_per_generation < 1)
        throw std::invalid_argument("horizon.rounds_per_generation: must be positive");
    if (shift_leeway < 0)
        throw std::invalid_argument("horizon.shift_leeway: must be non-negative");
    if (min_spacing < 1)
        throw std::invalid_argument("horizon.min_spacing: must be at least 1");
    if (convergence_patience < 1)
        throw std::invalid_argument("horizon.convergence_patience: must be positive");
    if (values_per_intersection < 2)
        throw std::invalid_argument("horizon.values_per_intersection: must be at least 2");
}

int ActionGrid::spacing(int intersection) const {
    const Interval& iv = intervals[intersection];
    if (iv.hi == iv.lo) return 0;
    const double raw = static_cast<double>(iv.hi - iv.lo) / (values_per_intersection - 1);
    return std::max(1, static_cast<int>(std::lround(raw)));
}

int ActionGrid::max_spacing() const {
    int result = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i)
        result = std::max(result, spacing(static_cast<int>(i)));
    return result;
}

std::vector<int> ActionGrid::values(int intersection) const {
    const Interval& iv = intervals[intersection];
    if (iv.lo == iv.hi) return {iv.lo};
    std::vector<int> vals(values_per_intersection);
    const double span = static_cast<double>(iv.hi - iv.lo);
    for (int j = 0; j < values_per_intersection; ++j)
        vals[j] = iv.lo + static_cast<int>(
                              std::lround(span * j / (values_per_intersection - 1)));
    return vals;
}

ActionGrid ActionGrid::full(const Scenario& scenario, int values_per_intersection) {
    ActionGrid grid;
    grid.values_per_intersection = values_per_intersection;
    grid.intervals.assign(scenario.intersection_count(),
                          {scenario.params.green_min_s, scenario.params.green_max_s});
    return grid;
}

std::vector<JointAction> build_actions(const ActionGrid& grid) {
    std::vector<std::vector<int>> per_intersection;
    per_intersection.reserve(grid.intervals.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
        per_intersection.push_back(grid.values(static_cast<int>(i)));
        total *= per_intersection.back().size();
    }

    std::vector<JointAction> actions;
    actions.reserve(total);
    JointAction current(grid.intervals.size());
    // Odometer over the value lists, first intersection most significant.
    std::vector<std::size_t> digit(grid.intervals.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < grid.intervals.size(); ++i)
            current[i] = per_intersection[i][digit[i]];
        actions.push_back(current);
        for (std::size_t i = grid.intervals.size(); i-- > 0;) {
            if (++digit[i] < per_intersection[i].size()) break;
            digit[i] = 0;
        }
    }
    return actions;
}

void ActionStats::record(const JointAction& action, double total_cost) {
    for (std::size_t i = 0; i < by_value_.size(); ++i) {
        Tally& tally = by_value_[i][action[i]];
        tally.cost_sum += total_cost;
        tally.count += 1;
    }
}

int ActionStats::best_value(int intersection) const {
    const auto& tallies = by_value_[intersection];
    if (tallies.empty()) throw std::runtime_error("contract: no evaluated actions");
    int best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (const auto& [value, tally] : tallies) {
        const double mean = tally.cost_sum / tally.count;
        if (mean < best_mean) {  // map iterates values ascending: ties keep the smaller
            best_mean = mean;
            best = value;
        }
    }
    return best;
}

bool ActionStats::empty() const {
    for (const auto& tallies : by_value_)
        if (!tallies.empty()) return false;
    return true;
}

ActionGrid contract(const ActionGrid& grid, const ActionStats& stats,
                    const Scenario& scenario) {
    if (stats.empty()) throw std::runtime_error("contract: no evaluated actions");
    ActionGrid next = grid;
    next.generation = grid.generation + 1;
    for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
        const int best = stats.best_value(static_cast<int>(i));
        const int s = grid.spacing(static_cast<int>(i));
        const auto& parent = grid.intervals[i];
        int lo = std::max({best - s, parent.lo, scenario.params.green_min_s});
        int hi = std::min({best + s, parent.hi, scenario.params.green_max_s});
        if (lo > hi) lo = hi = std::clamp(best, parent.lo, parent.hi);
        next.intervals[i] = {lo, hi};
    }
    return next;
}

ActionGrid shift(const ActionGrid& grid, int intersection, int direction, int eta,
                 const Scenario& scenario) {
    ActionGrid next = grid;
    const auto& iv = grid.intervals[intersection];
    // Clip the displacement itself so the width survives at the bounds.
    const int lo_room = scenario.params.green_min_s - iv.lo;   // <= 0
    const int hi_room = scenario.params.green_max_s - iv.hi;   // >= 0
    const int wanted = direction * eta;
    const int applied = std::clamp(wanted, lo_room, hi_room);
    next.intervals[intersection] = {iv.lo + applied, iv.hi + applied};
    return next;
}

namespace {

struct GenerationOutcome {
    QTable qtable;
    std::vector<JointAction> actions;
    ActionStats stats;
    double greedy_cost = 0.0;
};

// Train a fresh table on the grid, measure its greedy rollout, and evaluate
// every joint action by forcing it at step 0 with a greedy tail.
GenerationOutcome run_generation(const ActionGrid& grid, const Scenario& scenario,
                                 const RewardParams& reward_params,
                                 const UncertaintyConfig& uncertainty,
                                 const AgentParams& agent_params,
                                 const StateEncoder& encoder,
                                 const NetworkState& initial, std::uint64_t seed) {
    const int g = grid.generation;
    GenerationOutcome out{QTable{}, build_actions(grid),
                          ActionStats(grid.intervals.size())};

    TrainResult trained =
        train(scenario, reward_params, uncertainty, agent_params, encoder, out.actions,
              initial, seed, streams::generation_policy(g), streams::generation_env(g));
    out.qtable = std::move(trained.qtable);

    out.greedy_cost = greedy_rollout(out.qtable, scenario, reward_params, uncertainty,
                                     encoder, out.actions, initial,
                                     agent_params.horizon, seed,
                                     streams::generation_eval_env(g))
                          .total_cost();

    for (std::size_t j = 0; j < out.actions.size(); ++j) {
        const double cost =
            greedy_rollout(out.qtable, scenario, reward_params, uncertainty, encoder,
                           out.actions, initial, agent_params.horizon, seed,
                           streams::action_eval(g, out.actions.size(), j),
                           static_cast<int>(j))
                .total_cost();
        out.stats.record(out.actions[j], cost);
    }
    return out;
}

void log_generation(GenerationLog& log, const ActionGrid& grid,
                    const GenerationOutcome& outcome) {
    for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
        GenerationRecord rec;
        rec.generation = grid.generation;
        rec.intersection = static_cast<int>(i);
        rec.lo = grid.intervals[i].lo;
        rec.hi = grid.intervals[i].hi;
        rec.spacing = grid.spacing(static_cast<int>(i));
        rec.best_value = outcome.stats.best_value(static_cast<int>(i));
        rec.greedy_cost = outcome.greedy_cost;
        log.push_back(rec);
    }
}

}  // namespace

AdaptiveResult adaptive_train(const Scenario& scenario, const RewardParams& reward_params,
                              const UncertaintyConfig& uncertainty,
                              const AgentParams& agent_params,
                              const HorizonParams& horizon_params,
                              const StateEncoder& encoder, const NetworkState& initial,
                              std::uint64_t seed) {
    horizon_params.validate();
    AgentParams per_generation = agent_params;
    per_generation.episodes = horizon_params.rounds_per_generation;

    AdaptiveResult result;
    ActionGrid grid = ActionGrid::full(scenario, horizon_params.values_per_intersection);

    // Contraction phase: narrow every interval until the value spacing
    // bottoms out at min_spacing.
    GenerationOutcome outcome =
        run_generation(grid, scenario, reward_params, uncertainty, per_generation,
                       encoder, initial, seed);
    log_generation(result.log, grid, outcome);
    while (grid.max_spacing() > horizon_params.min_spacing) {
        ActionGrid contracted = contract(grid, outcome.stats, scenario);
        // An interior best with coarse spacing can reproduce the parent grid
        // exactly; stop contracting rather than loop on it.
        if (contracted.intervals == grid.intervals) break;
        grid = std::move(contracted);
        outcome = run_generation(grid, scenario, reward_params, uncertainty,
                                 per_generation, encoder, initial, seed);
        log_generation(result.log, grid, outcome);
    }

    // Shift phase: rigid +/-eta probes in a fixed cycle (intersections
    // ascending, + before -), first improvement accepted and the cycle
    // restarted; stops after convergence_patience consecutive failures.
    // Probes blocked by the green bounds count as failures, which bounds the
    // loop even when most directions are clipped.
    int stale = 0;
    std::size_t probe_idx = 0;
    const std::size_t cycle_len = 2 * grid.intervals.size();
    int next_generation = grid.generation + 1;
    while (horizon_params.shift_leeway > 0 && stale < horizon_params.convergence_patience) {
        const int intersection = static_cast<int>(probe_idx / 2);
        const int direction = probe_idx % 2 == 0 ? +1 : -1;
        probe_idx = (probe_idx + 1) % cycle_len;

        ActionGrid probe =
            shift(grid, intersection, direction, horizon_params.shift_leeway, scenario);
        if (probe == grid) {
            ++stale;
            continue;
        }
        probe.generation = next_generation++;
        GenerationOutcome probe_outcome =
            run_generation(probe, scenario, reward_params, uncertainty, per_generation,
                           encoder, initial, seed);
        log_generation(result.log, probe, probe_outcome);
        if (probe_outcome.greedy_cost < outcome.greedy_cost) {
            grid = std::move(probe);
            outcome = std::move(probe_outcome);
            stale = 0;
            probe_idx = 0;
        } else {
            ++stale;
        }
    }

    result.grid = grid;
    result.qtable = std::move(outcome.qtable);
    result.actions = std::move(outcome.actions);
    result.greedy_cost = outcome.greedy_cost;
    return result;
}

}  // namespace trafficrl
