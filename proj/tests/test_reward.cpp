#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "trafficrl/reward.hpp"
#include "trafficrl/rng.hpp"

using namespace trafficrl;

namespace {

NetworkState make_state(std::initializer_list<double> queues) {
    NetworkState s;
    s.queues = queues;
    return s;
}

}  // namespace

TEST_CASE("quadratic cost of queues and action change") {
    RewardParams params;
    params.cost_scale = 1.0;

    CHECK(control_cost(make_state({0.0, 0.0}), {60, 60}, {60, 60}, params) == 0.0);
    CHECK(control_cost(make_state({3.0, 4.0}), {60, 60}, {60, 60}, params) == 25.0);
    CHECK(control_cost(make_state({0.0, 0.0}), {60, 60}, {50, 70}, params) == 200.0);
}

TEST_CASE("cost scale divides the quadratic term") {
    RewardParams params;
    params.cost_scale = 100.0;
    CHECK(control_cost(make_state({3.0, 4.0}), {60}, {60}, params) == 0.25);
    CHECK(control_cost_raw(make_state({3.0, 4.0}), {60}, {60}) == 25.0);
}

TEST_CASE("reward is zero only for an empty network with unchanged control") {
    RewardParams params;
    const std::vector<double> caps{120.0, 120.0};
    CHECK(reward(make_state({0.0, 0.0}), {60, 60}, {60, 60}, caps, params) == 0.0);
    CHECK(reward(make_state({1.0, 0.0}), {60, 60}, {60, 60}, caps, params) < 0.0);
    CHECK(reward(make_state({0.0, 0.0}), {61, 60}, {60, 60}, caps, params) < 0.0);
}

TEST_CASE("overflow punishment uses the raw vehicle excess") {
    // Queue 130 against capacity 120 leaves 10 vehicles over the limit. The
    // scale is chosen so the quadratic term lands at 25; the punishment is
    // deliberately unscaled.
    RewardParams params;
    params.punishment_weight = 100.0;
    params.cost_scale = 676.0;  // 130^2 / 676 = 25
    const std::vector<double> caps{120.0};
    const double r = reward(make_state({130.0}), {60}, {60}, caps, params);
    CHECK(r == doctest::Approx(-1025.0).epsilon(1e-12));
}

TEST_CASE("overflowing transitions rank strictly below clean ones") {
    RewardParams params;
    const std::vector<double> caps{120.0, 140.0};
    StepRng rng(7, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double q0 = rng.uniform01() * 120.0;
        const double q1 = rng.uniform01() * 140.0;
        const NetworkState clean = make_state({q0, q1});
        NetworkState overflowing = clean;
        overflowing.queues[static_cast<std::size_t>(rng.uniform_below(2))] +=
            200.0 + rng.uniform01();

        const double r_clean = reward(clean, {60, 60}, {60, 60}, caps, params);
        const double r_over = reward(overflowing, {60, 60}, {60, 60}, caps, params);
        CHECK(r_over < r_clean);
        CHECK(r_clean <= 0.0);
    }
}

TEST_CASE("action preference is invariant to the cost scale") {
    RewardParams coarse;
    coarse.cost_scale = 1.0;
    RewardParams fine;
    fine.cost_scale = 1e4;
    const std::vector<double> caps{120.0, 120.0};
    const NetworkState state = make_state({40.0, 55.0});
    const JointAction prev{60, 60};

    const JointAction candidates[] = {{30, 90}, {55, 65}, {60, 60}, {90, 30}};
    int best_coarse = -1, best_fine = -1;
    double top_coarse = -1e300, top_fine = -1e300;
    for (int i = 0; i < 4; ++i) {
        const double rc = reward(state, candidates[i], prev, caps, coarse);
        const double rf = reward(state, candidates[i], prev, caps, fine);
        CHECK(rc == doctest::Approx(rf * 1e4).epsilon(1e-12));
        if (rc > top_coarse) { top_coarse = rc; best_coarse = i; }
        if (rf > top_fine) { top_fine = rf; best_fine = i; }
    }
    CHECK(best_coarse == best_fine);
}

TEST_CASE("reward parameters must be strictly positive") {
    RewardParams params;
    params.punishment_weight = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.punishment_weight = 100.0;
    params.cost_scale = -1.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
