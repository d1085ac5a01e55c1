#include "trafficrl/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trafficrl {

void UncertaintyConfig::validate() const {
    if (demand_pct < 0)
        throw std::invalid_argument("uncertainty.demand_pct: must be non-negative");
    if (turning_pct < 0)
        throw std::invalid_argument("uncertainty.turning_pct: must be non-negative");
    if (disturbance_std < 0)
        throw std::invalid_argument("uncertainty.disturbance_std: must be non-negative");
}

double pct_to_std(double pct, double mean, bool pct_is_variance) {
    if (pct_is_variance) return std::sqrt(pct / 100.0 * mean);
    return pct / 100.0 * mean;
}

double sample_demand(double mean_veh_s, double demand_pct, bool pct_is_variance,
                     StepRng& rng) {
    if (demand_pct == 0.0 || mean_veh_s == 0.0) return mean_veh_s;
    const double std = pct_to_std(demand_pct, mean_veh_s, pct_is_variance);
    return std::max(0.0, rng.normal(mean_veh_s, std));
}

TurnMatrix sample_turning(const TurnMatrix& base, double turning_pct,
                          bool pct_is_variance, bool renormalize, StepRng& rng) {
    if (turning_pct == 0.0) return base;
    const std::size_t n = base.road_count();
    TurnMatrix sampled(n);
    for (std::size_t p = 0; p < n; ++p) {
        const int from = static_cast<int>(p);
        const auto& dests = base.destinations(from);
        if (dests.empty()) continue;
        std::vector<double> row(dests.size());
        double sum = 0.0;
        for (int attempt = 0; attempt < 32 && sum <= 0.0; ++attempt) {
            sum = 0.0;
            for (std::size_t d = 0; d < dests.size(); ++d) {
                const double tau = base.at(from, dests[d]);
                const double std = pct_to_std(turning_pct, tau, pct_is_variance);
                row[d] = std::clamp(rng.normal(tau, std), 0.0, 1.0);
                sum += row[d];
            }
        }
        if (sum <= 0.0)
            throw std::runtime_error("sample_turning: row for road index " +
                                     std::to_string(p) +
                                     " collapsed to zero after bounded retries");
        for (std::size_t d = 0; d < dests.size(); ++d)
            sampled.set(from, dests[d], renormalize ? row[d] / sum : row[d]);
    }
    return sampled;
}

std::vector<double> sample_disturbance(std::size_t road_count, double disturbance_std,
                                       StepRng& rng) {
    std::vector<double> e(road_count, 0.0);
    if (disturbance_std == 0.0) return e;
    for (std::size_t r = 0; r < road_count; ++r)
        e[r] = rng.normal(0.0, disturbance_std);
    return e;
}

EnvSampler::EnvSampler(const Scenario& scenario, const UncertaintyConfig& config,
                       std::uint64_t seed, std::uint64_t stream)
    : scenario_(&scenario), config_(config), seed_(seed), stream_(stream),
      demand_(scenario.demand_mean_veh_s), turning_(scenario.turning),
      disturbance_(scenario.road_count(), 0.0) {}

EnvSampler::Sample EnvSampler::sample(std::uint64_t step) {
    if (!deterministic()) {
        StepRng rng(seed_, stream_, step);
        // Draw order is part of the replay contract: demands by ascending
        // road index, then the turning matrix, then disturbances.
        if (config_.demand_pct > 0.0) {
            for (std::size_t r = 0; r < scenario_->road_count(); ++r)
                demand_[r] = sample_demand(scenario_->demand_mean_veh_s[r],
                                           config_.demand_pct, config_.pct_is_variance, rng);
        }
        if (config_.turning_pct > 0.0)
            turning_ = sample_turning(scenario_->turning, config_.turning_pct,
                                      config_.pct_is_variance,
                                      config_.renormalize_turning, rng);
        if (config_.disturbance_std > 0.0)
            disturbance_ = sample_disturbance(scenario_->road_count(),
                                              config_.disturbance_std, rng);
    }
    return {&demand_, &turning_, &disturbance_};
}

}  // namespace trafficrl
