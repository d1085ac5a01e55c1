#pragma once

#include <vector>

#include "trafficrl/network.hpp"

namespace trafficrl {

struct RewardParams {
    double punishment_weight = 100.0;  // applied to raw overflow vehicles
    double cost_scale = 1e4;           // divides the quadratic term only

    void validate() const;
};

// Quadratic control cost: (||queues||^2 + ||action - prev_action||^2), not
// yet scaled. Green times enter in seconds.
double control_cost_raw(const NetworkState& state, const JointAction& action,
                        const JointAction& prev_action);

// control_cost_raw / cost_scale.
double control_cost(const NetworkState& state, const JointAction& action,
                    const JointAction& prev_action, const RewardParams& params);

// Reward for landing in `state` after applying `action` (with `prev_action`
// the previous interval's choice): the negated control cost, minus
// punishment_weight times the L2 norm of the overflow vector. The punishment
// term is deliberately unscaled so one overflowing vehicle already dwarfs
// any achievable cost difference.
double reward(const NetworkState& state, const JointAction& action,
              const JointAction& prev_action, const std::vector<double>& capacities,
              const RewardParams& params);

}  // namespace trafficrl
