#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace trafficrl {

// Mixes a master seed with a stream id, for independent per-purpose streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Random source for one simulation step. Every draw is a pure function of
// (seed, stream, step): re-creating a StepRng for the same triple replays the
// exact same values regardless of what other streams or steps consumed.
// mt19937_64 output is bit-specified by the standard, and the uniform/normal
// transforms below are plain bit arithmetic, so replays are byte-identical
// across platforms and standard libraries.
class StepRng {
public:
    StepRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t step)
        : engine_(mix_seed(mix_seed(seed, stream), step)) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), rejection-sampled so there is no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Box-Muller; the spare value is cached, so draws come in deterministic
    // pairs within one StepRng.
    double normal(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(theta);
        has_spare_ = true;
        return mean + stddev * radius * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stream id layout. Training, evaluation and sweep draws never share a
// stream, so adding draws to one phase cannot shift another.
namespace streams {
// Regular training and rollouts.
constexpr std::uint64_t kTrainPolicy = 0;  // epsilon-greedy decisions
constexpr std::uint64_t kTrainEnv = 1;     // demand/turning/disturbance while training
constexpr std::uint64_t kGreedyEnv = 2;    // greedy evaluation rollout
// Adaptive generations: each generation g gets its own triple.
constexpr std::uint64_t kGenerationBase = 10'000;
inline std::uint64_t generation_policy(int g) { return kGenerationBase + 3ull * g; }
inline std::uint64_t generation_env(int g) { return kGenerationBase + 3ull * g + 1; }
inline std::uint64_t generation_eval_env(int g) { return kGenerationBase + 3ull * g + 2; }
// Per-action evaluation rollouts: generation * action_count + action_index.
constexpr std::uint64_t kActionEvalBase = 2'000'000;
inline std::uint64_t action_eval(int g, std::size_t action_count, std::size_t action_index) {
    return kActionEvalBase + static_cast<std::uint64_t>(g) * action_count + action_index;
}
// Sweep cells, keyed by (pct index, seed index); aggregation is order-free.
constexpr std::uint64_t kSweepBase = 1'000'000;
inline std::uint64_t sweep_cell(std::size_t pct_index, std::size_t n_seeds, std::size_t seed_index) {
    return kSweepBase + pct_index * n_seeds + seed_index;
}
}  // namespace streams

}  // namespace trafficrl
