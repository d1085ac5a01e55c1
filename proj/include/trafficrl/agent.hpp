#pragma once

#include <cstdint>
#include <vector>

#include "trafficrl/network.hpp"
#include "trafficrl/qtable.hpp"
#include "trafficrl/reward.hpp"
#include "trafficrl/rng.hpp"
#include "trafficrl/stochastics.hpp"
#include "trafficrl/trace.hpp"

namespace trafficrl {

// Discretizes queue vectors into a single table index. Each monitored road
// contributes bin(q) = min(max_bins, floor(q / bin_width)); bins are packed
// mixed-radix with radix max_bins + 1, first monitored road least
// significant.
struct StateEncoder {
    double bin_width = 20.0;
    int max_bins = 13;
    std::vector<int> monitored;  // road indices; empty is invalid

    void validate(std::size_t road_count) const;
};

std::uint64_t encode_state(const NetworkState& state, const StateEncoder& encoder);

enum class UpdateRule {
    standard,  // Q += alpha * (r + gamma * maxQ' - Q)
    literal,   // Q += alpha * (r + gamma * (maxQ' - Q))
};

struct AgentParams {
    double alpha = 0.1;    // learning rate, (0, 1]
    double gamma = 0.9;    // discount, [0, 1]
    double epsilon = 0.5;  // exploration probability, [0, 1]
    int episodes = 3000;
    int horizon = 6;  // steps per episode
    UpdateRule update_rule = UpdateRule::standard;
    bool anneal_epsilon = false;   // linear decay toward epsilon_final
    double epsilon_final = 0.05;

    void validate() const;
};

// With probability epsilon a uniform random action, otherwise the greedy one
// (lowest index on ties). Consumes one uniform draw on the exploit path, two
// on the explore path.
std::uint32_t select_action(const QTable& qtable, std::uint64_t state,
                            std::size_t action_count, double epsilon, StepRng& rng);

// One tabular Q-learning backup. `terminal` drops the bootstrap term.
void update(QTable& qtable, std::uint64_t s, std::uint32_t a, double r,
            std::uint64_t s_next, double alpha, double gamma, bool terminal = false,
            UpdateRule rule = UpdateRule::standard);

struct TrainStats {
    std::vector<double> episode_return;  // discounted return per episode
    std::uint64_t updates = 0;
};

struct TrainResult {
    QTable qtable;
    TrainStats stats;
};

// Runs `episodes` episodes of `horizon` steps from `initial`, each step:
// select, simulate, reward, update. Episode steps are terminal-bootstrapped
// at the horizon. The previous action (for the action-change cost) starts
// each episode equal to the first action taken, so step 0 carries no change
// penalty. Policy draws come from (seed, policy_stream, global step);
// environment draws from (seed, env_stream, global step).
TrainResult train(const Scenario& scenario, const RewardParams& reward_params,
                  const UncertaintyConfig& uncertainty, const AgentParams& params,
                  const StateEncoder& encoder, const std::vector<JointAction>& actions,
                  const NetworkState& initial, std::uint64_t seed,
                  std::uint64_t policy_stream, std::uint64_t env_stream);

// Pure-exploitation rollout of a trained table. Environment draws come from
// (seed, env_stream, step). `forced_first` (index into `actions`, -1 to
// disable) overrides the greedy choice at step 0; evaluation rollouts use it
// to probe one action with a greedy tail.
RunTrace greedy_rollout(const QTable& qtable, const Scenario& scenario,
                        const RewardParams& reward_params,
                        const UncertaintyConfig& uncertainty,
                        const StateEncoder& encoder,
                        const std::vector<JointAction>& actions,
                        const NetworkState& initial, int horizon, std::uint64_t seed,
                        std::uint64_t env_stream, int forced_first = -1);

}  // namespace trafficrl
