#include "trafficrl/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trafficrl {

std::vector<double> road_capacities(const Scenario& scenario) {
    std::vector<double> delta(scenario.road_count());
    for (std::size_t r = 0; r < delta.size(); ++r)
        delta[r] = scenario.roads[r].length_m / scenario.params.vehicle_length_m;
    return delta;
}

double outflow_rate(double green_s, double saturation_veh_h, double cycle_s) {
    return (saturation_veh_h / 3600.0) * green_s / cycle_s;
}

double inflow_rate(int road, const TurnMatrix& turning,
                   const std::vector<double>& outflow_rates) {
    double rate = 0.0;
    for (int p : turning.sources(road)) rate += turning.at(p, road) * outflow_rates[p];
    return rate;
}

double effective_green(const Scenario& scenario, int road, const JointAction& action) {
    const double green = action[scenario.road_signal_pos[road]];
    if (scenario.roads[road].phase == Phase::cross)
        return scenario.params.cycle_s - green;
    return green;
}

NetworkState step(const Scenario& scenario, const NetworkState& state,
                  const JointAction& action, const std::vector<double>& demand_veh_s,
                  const TurnMatrix& turning, const std::vector<double>& disturbance) {
    const std::size_t n = scenario.road_count();
    if (state.size() != n) throw std::invalid_argument("step: state size mismatch");
    if (action.size() != scenario.intersection_count())
        throw std::invalid_argument("step: action size mismatch");
    if (demand_veh_s.size() != n) throw std::invalid_argument("step: demand size mismatch");
    if (disturbance.size() != n)
        throw std::invalid_argument("step: disturbance size mismatch");
    for (std::size_t i = 0; i < action.size(); ++i)
        if (action[i] < scenario.params.green_min_s ||
            action[i] > scenario.params.green_max_s)
            throw std::invalid_argument("step: green time outside bounds at intersection " +
                                        std::to_string(scenario.intersections[i].id));

    const double T = scenario.params.interval_s;
    const double S = scenario.params.saturation_veh_h;
    const double C = scenario.params.cycle_s;

    // Signal-limited discharge rate per road.
    std::vector<double> rate_cap(n);
    for (std::size_t r = 0; r < n; ++r)
        rate_cap[r] =
            outflow_rate(effective_green(scenario, static_cast<int>(r), action), S, C);

    // Outflow is also limited by queue/T + inflow, and inflow is built from
    // upstream outflow. Starting from zero inflow and sweeping, both vectors
    // grow monotonically to the least fixed point: the flow pattern where
    // nothing is discharged that never arrived. Loop-free routing converges
    // in `depth` sweeps; the iteration cap covers the general case.
    std::vector<double> outflow(n), inflow(n);
    for (std::size_t r = 0; r < n; ++r)
        outflow[r] = std::min(rate_cap[r], state.queues[r] / T);
    for (std::size_t sweep = 0; sweep < n + 1; ++sweep) {
        double shift_total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            inflow[r] = demand_veh_s[r] +
                        inflow_rate(static_cast<int>(r), turning, outflow);
            const double next =
                std::min(rate_cap[r], state.queues[r] / T + inflow[r]);
            shift_total += next - outflow[r];
            outflow[r] = next;
        }
        if (shift_total < 1e-15) break;
    }

    NetworkState next;
    next.queues.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double q =
            state.queues[r] + T * (inflow[r] - outflow[r]) + disturbance[r];
        next.queues[r] = std::max(0.0, q);
    }
    return next;
}

std::vector<double> overflow_vector(const NetworkState& state,
                                    const std::vector<double>& capacities) {
    std::vector<double> c(state.size());
    for (std::size_t r = 0; r < state.size(); ++r)
        c[r] = std::max(0.0, state.queues[r] - capacities[r]);
    return c;
}

bool any_overflow(const NetworkState& state, const std::vector<double>& capacities) {
    for (std::size_t r = 0; r < state.size(); ++r)
        if (state.queues[r] > capacities[r]) return true;
    return false;
}

}  // namespace trafficrl
