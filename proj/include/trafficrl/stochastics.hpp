#pragma once

#include <cstdint>
#include <vector>

#include "trafficrl/rng.hpp"
#include "trafficrl/scenario.hpp"

namespace trafficrl {

struct UncertaintyConfig {
    double demand_pct = 0.0;       // relative std-dev of entry demand, percent
    double turning_pct = 0.0;      // relative std-dev of turning rates, percent
    double disturbance_std = 0.0;  // absolute std-dev of e, vehicles
    std::uint64_t seed = 1;
    // Keep perturbed turning rows summing to 1, so intersections neither
    // create nor destroy vehicles. Off reproduces independent perturbation.
    bool renormalize_turning = true;
    // Read pct as percentage of variance instead of relative std-dev.
    bool pct_is_variance = false;

    void validate() const;
};

// std-dev implied by a pct knob for a quantity with the given mean.
double pct_to_std(double pct, double mean, bool pct_is_variance);

// Normal(mean, std from pct) truncated at 0. pct = 0 returns the mean
// exactly, consuming no draws.
double sample_demand(double mean_veh_s, double demand_pct, bool pct_is_variance,
                     StepRng& rng);

// Each nonzero entry perturbed by Normal(tau, std from pct), clamped to
// [0,1]; rows renormalized to sum 1 when configured. Zero entries stay zero.
// A row whose entries all clamp to 0 is resampled (bounded retries, then
// throws). Draw order: source rows ascending, destinations ascending.
TurnMatrix sample_turning(const TurnMatrix& base, double turning_pct,
                          bool pct_is_variance, bool renormalize, StepRng& rng);

// i.i.d. Normal(0, std^2) per road; empty-variance shortcut returns zeros
// without consuming draws.
std::vector<double> sample_disturbance(std::size_t road_count, double disturbance_std,
                                       StepRng& rng);

// Bundles the three samplers behind the per-step stream discipline: sampling
// at step k is a pure function of (seed, stream, k), with a fixed draw order
// inside the step (demands by road index, then turning, then disturbance).
class EnvSampler {
public:
    EnvSampler(const Scenario& scenario, const UncertaintyConfig& config,
               std::uint64_t seed, std::uint64_t stream);

    // Demand vector (veh/s per road), turning matrix and disturbance for one
    // step. References stay valid until the next sample() call.
    struct Sample {
        const std::vector<double>* demand;
        const TurnMatrix* turning;
        const std::vector<double>* disturbance;
    };
    Sample sample(std::uint64_t step);

    bool deterministic() const {
        return config_.demand_pct == 0.0 && config_.turning_pct == 0.0 &&
               config_.disturbance_std == 0.0;
    }

private:
    const Scenario* scenario_;
    UncertaintyConfig config_;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::vector<double> demand_;
    TurnMatrix turning_;
    std::vector<double> disturbance_;
};

}  // namespace trafficrl
