#include "trafficrl/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace trafficrl {

void RewardParams::validate() const {
    if (punishment_weight <= 0)
        throw std::invalid_argument("reward.punishment_weight: must be strictly positive");
    if (cost_scale <= 0)
        throw std::invalid_argument("reward.cost_scale: must be strictly positive");
}

double control_cost_raw(const NetworkState& state, const JointAction& action,
                        const JointAction& prev_action) {
    double cost = 0.0;
    for (double q : state.queues) cost += q * q;
    for (std::size_t i = 0; i < action.size(); ++i) {
        const double change = static_cast<double>(action[i] - prev_action[i]);
        cost += change * change;
    }
    return cost;
}

double control_cost(const NetworkState& state, const JointAction& action,
                    const JointAction& prev_action, const RewardParams& params) {
    return control_cost_raw(state, action, prev_action) / params.cost_scale;
}

double reward(const NetworkState& state, const JointAction& action,
              const JointAction& prev_action, const std::vector<double>& capacities,
              const RewardParams& params) {
    const double f = control_cost(state, action, prev_action, params);
    double overflow_sq = 0.0;
    for (std::size_t r = 0; r < state.size(); ++r) {
        const double c = state.queues[r] - capacities[r];
        if (c > 0.0) overflow_sq += c * c;
    }
    if (overflow_sq == 0.0) return -f;
    return -(f + params.punishment_weight * std::sqrt(overflow_sq));
}

}  // namespace trafficrl
