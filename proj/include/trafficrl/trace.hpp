#pragma once

#include <vector>

#include "trafficrl/network.hpp"

namespace trafficrl {

// One control interval of a rollout. `state` is the queue vector after the
// action took effect; reward and cost refer to that transition.
struct TraceStep {
    NetworkState state;
    JointAction action;
    double reward = 0.0;
    double cost = 0.0;  // normalized quadratic cost, excludes punishment
    std::vector<bool> overflow;

    bool any_overflow() const {
        for (bool f : overflow)
            if (f) return true;
        return false;
    }
};

struct RunTrace {
    std::vector<TraceStep> steps;

    // Sum of -reward: quadratic cost plus overflow punishment. The quantity
    // runs are compared by.
    double total_cost() const {
        double total = 0.0;
        for (const auto& s : steps) total -= s.reward;
        return total;
    }

    bool any_overflow() const {
        for (const auto& s : steps)
            if (s.any_overflow()) return true;
        return false;
    }
};

}  // namespace trafficrl
