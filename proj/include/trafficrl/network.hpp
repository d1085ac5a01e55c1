#pragma once

#include <cstddef>
#include <vector>

#include "trafficrl/scenario.hpp"

namespace trafficrl {

// Queue lengths in vehicles, indexed like Scenario::roads. Real-valued:
// rate * time is fractional; rounding happens only at state encoding and
// reporting.
struct NetworkState {
    std::vector<double> queues;

    std::size_t size() const { return queues.size(); }
    double operator[](std::size_t i) const { return queues[i]; }
    bool operator==(const NetworkState&) const = default;
};

// Maximum vehicles each road can hold: length / vehicle_length.
std::vector<double> road_capacities(const Scenario& scenario);

// Vehicles per second discharged under `green_s` seconds of green per cycle:
// saturation * green / cycle. Pure rate law; green-bound checks live with the
// actions, and the cannot-discharge-more-than-present cap lives in step().
double outflow_rate(double green_s, double saturation_veh_h, double cycle_s);

// Turning-weighted sum of upstream outflow rates into road r. Exogenous
// entry demand is not part of this; step() adds it separately.
double inflow_rate(int road, const TurnMatrix& turning,
                   const std::vector<double>& outflow_rates);

// Discharge seconds per cycle a joint action grants `road`: the
// intersection's green time for green-phase roads, cycle - green for
// cross-phase roads.
double effective_green(const Scenario& scenario, int road, const JointAction& action);

// One control interval of store-and-forward dynamics:
//   q' = q + T * (inflow - outflow) + disturbance, clamped at 0.
// Outflow is capped at queue/T + inflow, so discharge never exceeds what is
// present; the per-road outflows are solved jointly by monotone fixed-point
// iteration (exact after as many sweeps as the routing depth on loop-free
// graphs). Exit roads discharge out of the network. Inputs are not mutated.
NetworkState step(const Scenario& scenario, const NetworkState& state,
                  const JointAction& action, const std::vector<double>& demand_veh_s,
                  const TurnMatrix& turning, const std::vector<double>& disturbance);

// Per-road overflow amounts: max(0, queue - capacity).
std::vector<double> overflow_vector(const NetworkState& state,
                                    const std::vector<double>& capacities);

// True if any queue strictly exceeds its capacity.
bool any_overflow(const NetworkState& state, const std::vector<double>& capacities);

}  // namespace trafficrl
