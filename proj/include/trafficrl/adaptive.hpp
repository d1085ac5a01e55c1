#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "trafficrl/agent.hpp"

namespace trafficrl {

// Per-intersection green-time intervals plus the shared per-intersection
// value count. The candidate greens of intersection i are n_v integers
// evenly spaced over [lo, hi] (rounded; collapsed to the single value lo
// when lo == hi).
struct ActionGrid {
    struct Interval {
        int lo = 0;
        int hi = 0;
        bool operator==(const Interval&) const = default;
    };
    std::vector<Interval> intervals;
    int values_per_intersection = 7;
    int generation = 0;

    // Integer spacing between consecutive candidate values, >= 1 while the
    // interval has positive width, 0 when degenerate.
    int spacing(int intersection) const;
    int max_spacing() const;
    std::vector<int> values(int intersection) const;

    bool operator==(const ActionGrid& other) const {
        return intervals == other.intervals &&
               values_per_intersection == other.values_per_intersection;
    }

    // Full [green_min, green_max] interval on every intersection.
    static ActionGrid full(const Scenario& scenario, int values_per_intersection);
};

// Cartesian product of the per-intersection value lists, lexicographic with
// the first intersection most significant. Size n_v^intersections (degenerate
// intervals contribute a single value).
std::vector<JointAction> build_actions(const ActionGrid& grid);

// Mean evaluation cost of each green value actually tried, marginalized per
// intersection over the joint actions containing it.
class ActionStats {
public:
    explicit ActionStats(std::size_t intersections) : by_value_(intersections) {}

    void record(const JointAction& action, double total_cost);
    // Value with the lowest mean cost; ties break toward the smaller green.
    int best_value(int intersection) const;
    bool empty() const;

private:
    struct Tally {
        double cost_sum = 0.0;
        int count = 0;
    };
    std::vector<std::map<int, Tally>> by_value_;
};

// One contraction step: per intersection, [best - spacing, best + spacing]
// intersected with the parent interval and the global green bounds. The
// result is always a subset of `grid`; the generation index advances.
ActionGrid contract(const ActionGrid& grid, const ActionStats& stats,
                    const Scenario& scenario);

// Rigid shift of one intersection's interval by direction * eta, with the
// shift amount clipped so both endpoints stay inside the green bounds (width
// is always preserved; a fully blocked shift returns the grid unchanged).
ActionGrid shift(const ActionGrid& grid, int intersection, int direction, int eta,
                 const Scenario& scenario);

struct HorizonParams {
    int rounds_per_generation = 300;  // training episodes per generation
    int shift_leeway = 2;             // eta, seconds
    int min_spacing = 1;              // contraction stops at this spacing
    int convergence_patience = 8;     // non-improving shift probes before stopping
    int values_per_intersection = 7;

    void validate() const;
};

struct GenerationRecord {
    int generation = 0;
    int intersection = 0;
    int lo = 0;
    int hi = 0;
    int spacing = 0;
    int best_value = 0;
    double greedy_cost = 0.0;
};
using GenerationLog = std::vector<GenerationRecord>;

struct AdaptiveResult {
    ActionGrid grid;
    QTable qtable;
    std::vector<JointAction> actions;  // built from `grid`
    GenerationLog log;
    double greedy_cost = 0.0;  // evaluation cost of the returned table
};

// The adaptive-horizon loop. Contraction phase: train a fresh table on the
// current grid, evaluate every joint action (forced first step, greedy
// tail), contract toward the per-intersection best values; repeat until
// every spacing is at min_spacing. Shift phase: probe rigid +/-eta shifts
// per intersection (ascending, + before -), retraining each probe, keeping
// it only on strict cost improvement and restarting the probe cycle;
// terminate after convergence_patience consecutive non-improving probes.
AdaptiveResult adaptive_train(const Scenario& scenario, const RewardParams& reward_params,
                              const UncertaintyConfig& uncertainty,
                              const AgentParams& agent_params,
                              const HorizonParams& horizon_params,
                              const StateEncoder& encoder, const NetworkState& initial,
                              std::uint64_t seed);

}  // namespace trafficrl
