#include "trafficrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace trafficrl {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw std::invalid_argument(field + ": " + message);
}

std::vector<int> parse_monitored(const RunConfig& config, const nlohmann::json& j) {
    std::vector<int> monitored;
    for (const auto& id : j) {
        const int r = config.scenario.road_index(id.get<std::string>());
        if (r < 0) fail("encoder.monitored", "unknown road '" + id.get<std::string>() + "'");
        monitored.push_back(r);
    }
    return monitored;
}

}  // namespace

void RunConfig::validate() const {
    reward.validate();
    uncertainty.validate();
    agent.validate();
    encoder.validate(scenario.road_count());
    horizon.validate();
    if (initial_state.size() != scenario.road_count())
        fail("initial_queues", "size does not match road count");
    for (double q : initial_state.queues)
        if (q < 0 || !std::isfinite(q)) fail("initial_queues", "must be finite and >= 0");
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig config;
    config.scenario = Scenario::from_json(j);

    if (j.contains("reward")) {
        const auto& jr = j["reward"];
        config.reward.punishment_weight =
            jr.value("punishment_weight", config.reward.punishment_weight);
        config.reward.cost_scale = jr.value("cost_scale", config.reward.cost_scale);
    }
    if (j.contains("uncertainty")) {
        const auto& ju = j["uncertainty"];
        config.uncertainty.demand_pct = ju.value("demand_pct", 0.0);
        config.uncertainty.turning_pct = ju.value("turning_pct", 0.0);
        config.uncertainty.disturbance_std = ju.value("disturbance_std", 0.0);
        config.uncertainty.seed = ju.value("seed", std::uint64_t{1});
        config.uncertainty.renormalize_turning = ju.value("renormalize_turning", true);
        config.uncertainty.pct_is_variance = ju.value("pct_is_variance", false);
    }
    if (j.contains("agent")) {
        const auto& ja = j["agent"];
        config.agent.alpha = ja.value("alpha", config.agent.alpha);
        config.agent.gamma = ja.value("gamma", config.agent.gamma);
        config.agent.epsilon = ja.value("epsilon", config.agent.epsilon);
        config.agent.episodes = ja.value("episodes", config.agent.episodes);
        config.agent.horizon = ja.value("horizon", config.agent.horizon);
        const std::string rule = ja.value("update_rule", std::string{"standard"});
        if (rule == "standard")
            config.agent.update_rule = UpdateRule::standard;
        else if (rule == "literal")
            config.agent.update_rule = UpdateRule::literal;
        else
            fail("agent.update_rule", "expected standard|literal, got '" + rule + "'");
        config.agent.anneal_epsilon = ja.value("anneal_epsilon", false);
        config.agent.epsilon_final = ja.value("epsilon_final", config.agent.epsilon_final);
    }
    if (j.contains("encoder")) {
        const auto& je = j["encoder"];
        config.encoder.bin_width = je.value("bin_width", config.encoder.bin_width);
        config.encoder.max_bins = je.value("max_bins", config.encoder.max_bins);
        if (je.contains("monitored"))
            config.encoder.monitored = parse_monitored(config, je["monitored"]);
    }
    if (config.encoder.monitored.empty())
        for (std::size_t r = 0; r < config.scenario.road_count(); ++r)
            config.encoder.monitored.push_back(static_cast<int>(r));

    if (j.contains("horizon_search")) {
        const auto& jh = j["horizon_search"];
        auto& h = config.horizon;
        h.rounds_per_generation = jh.value("rounds_per_generation", h.rounds_per_generation);
        h.shift_leeway = jh.value("shift_leeway", h.shift_leeway);
        h.min_spacing = jh.value("min_spacing", h.min_spacing);
        h.convergence_patience = jh.value("convergence_patience", h.convergence_patience);
        h.values_per_intersection =
            jh.value("values_per_intersection", h.values_per_intersection);
    }

    config.initial_state.queues.assign(config.scenario.road_count(), 20.0);
    if (j.contains("initial_queues")) {
        const auto& jq = j["initial_queues"];
        if (jq.is_number()) {
            config.initial_state.queues.assign(config.scenario.road_count(),
                                               jq.get<double>());
        } else if (jq.is_object()) {
            for (const auto& [road_id, value] : jq.items()) {
                const int r = config.scenario.road_index(road_id);
                if (r < 0) fail("initial_queues", "unknown road '" + road_id + "'");
                config.initial_state.queues[r] = value.get<double>();
            }
        } else {
            fail("initial_queues", "expected a number or a {road: value} object");
        }
    }

    config.validate();
    return config;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("config", "cannot open file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        fail("config", "invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["name"] = scenario.name;

    auto& roads = j["roads"] = nlohmann::json::array();
    for (const auto& road : scenario.roads)
        roads.push_back({{"id", road.id},
                         {"length_m", road.length_m},
                         {"kind", to_string(road.kind)},
                         {"intersection", road.intersection},
                         {"phase", to_string(road.phase)}});

    auto& turning = j["turning"] = nlohmann::json::object();
    for (std::size_t p = 0; p < scenario.road_count(); ++p) {
        const auto& dests = scenario.turning.destinations(static_cast<int>(p));
        if (dests.empty()) continue;
        auto& row = turning[scenario.roads[p].id] = nlohmann::json::object();
        for (int to : dests)
            row[scenario.roads[to].id] = scenario.turning.at(static_cast<int>(p), to);
    }

    j["params"] = {{"cycle_s", scenario.params.cycle_s},
                   {"interval_s", scenario.params.interval_s},
                   {"saturation_veh_h", scenario.params.saturation_veh_h},
                   {"vehicle_len_m", scenario.params.vehicle_length_m},
                   {"green_min_s", scenario.params.green_min_s},
                   {"green_max_s", scenario.params.green_max_s}};

    auto& demand = j["demand"] = nlohmann::json::object();
    for (std::size_t r = 0; r < scenario.road_count(); ++r)
        if (scenario.roads[r].kind == RoadKind::entry)
            demand[scenario.roads[r].id] = scenario.demand_mean_veh_s[r];

    j["reward"] = {{"punishment_weight", reward.punishment_weight},
                   {"cost_scale", reward.cost_scale}};
    j["uncertainty"] = {{"demand_pct", uncertainty.demand_pct},
                        {"turning_pct", uncertainty.turning_pct},
                        {"disturbance_std", uncertainty.disturbance_std},
                        {"seed", uncertainty.seed},
                        {"renormalize_turning", uncertainty.renormalize_turning},
                        {"pct_is_variance", uncertainty.pct_is_variance}};
    j["agent"] = {{"alpha", agent.alpha},
                  {"gamma", agent.gamma},
                  {"epsilon", agent.epsilon},
                  {"episodes", agent.episodes},
                  {"horizon", agent.horizon},
                  {"update_rule",
                   agent.update_rule == UpdateRule::standard ? "standard" : "literal"},
                  {"anneal_epsilon", agent.anneal_epsilon},
                  {"epsilon_final", agent.epsilon_final}};

    auto monitored_ids = nlohmann::json::array();
    for (int r : encoder.monitored) monitored_ids.push_back(scenario.roads[r].id);
    j["encoder"] = {{"bin_width", encoder.bin_width},
                    {"max_bins", encoder.max_bins},
                    {"monitored", monitored_ids}};

    j["horizon_search"] = {{"rounds_per_generation", horizon.rounds_per_generation},
                           {"shift_leeway", horizon.shift_leeway},
                           {"min_spacing", horizon.min_spacing},
                           {"convergence_patience", horizon.convergence_patience},
                           {"values_per_intersection", horizon.values_per_intersection}};

    auto& queues = j["initial_queues"] = nlohmann::json::object();
    for (std::size_t r = 0; r < scenario.road_count(); ++r)
        queues[scenario.roads[r].id] = initial_state.queues[r];

    return j;
}

namespace {

// Rollout applying `pick(state, step)`; shared by the fixed baseline, the
// oracle enumerations and the sweep cells.
template <class Pick>
RunTrace policy_rollout(const RunConfig& config, const UncertaintyConfig& uncertainty,
                        Pick&& pick, int horizon, std::uint64_t seed,
                        std::uint64_t stream) {
    const std::vector<double> capacities = road_capacities(config.scenario);
    EnvSampler env(config.scenario, uncertainty, seed, stream);

    RunTrace trace;
    trace.steps.reserve(horizon);
    NetworkState state = config.initial_state;
    JointAction prev_action;

    for (int k = 0; k < horizon; ++k) {
        const JointAction& action = pick(state, k);
        const auto sample = env.sample(static_cast<std::uint64_t>(k));
        NetworkState next = step(config.scenario, state, action, *sample.demand,
                                 *sample.turning, *sample.disturbance);
        const JointAction& prev = k == 0 ? action : prev_action;

        TraceStep ts;
        ts.reward = reward(next, action, prev, capacities, config.reward);
        ts.cost = control_cost(next, action, prev, config.reward);
        const auto over = overflow_vector(next, capacities);
        ts.overflow.resize(over.size());
        for (std::size_t r = 0; r < over.size(); ++r) ts.overflow[r] = over[r] > 0.0;
        ts.action = action;
        ts.state = std::move(next);

        state = ts.state;
        prev_action = action;
        trace.steps.push_back(std::move(ts));
    }
    return trace;
}

}  // namespace

RegularResult run_regular(const RunConfig& config, std::uint64_t seed) {
    config.validate();
    const ActionGrid grid =
        ActionGrid::full(config.scenario, config.horizon.values_per_intersection);
    RegularResult result;
    result.actions = build_actions(grid);
    TrainResult trained = train(config.scenario, config.reward, config.uncertainty,
                                config.agent, config.encoder, result.actions,
                                config.initial_state, seed, streams::kTrainPolicy,
                                streams::kTrainEnv);
    result.qtable = std::move(trained.qtable);
    result.stats = std::move(trained.stats);
    result.trace = greedy_rollout(result.qtable, config.scenario, config.reward,
                                  config.uncertainty, config.encoder, result.actions,
                                  config.initial_state, config.agent.horizon, seed,
                                  streams::kGreedyEnv);
    return result;
}

AdaptiveRunResult run_adaptive(const RunConfig& config, std::uint64_t seed) {
    config.validate();
    AdaptiveRunResult result;
    result.adaptive =
        adaptive_train(config.scenario, config.reward, config.uncertainty, config.agent,
                       config.horizon, config.encoder, config.initial_state, seed);
    // Reported trace uses the same stream as run_regular, so paired seeds
    // compare the two controllers on identical noise.
    result.trace = greedy_rollout(result.adaptive.qtable, config.scenario, config.reward,
                                  config.uncertainty, config.encoder,
                                  result.adaptive.actions, config.initial_state,
                                  config.agent.horizon, seed, streams::kGreedyEnv);
    return result;
}

RunTrace run_fixed_time(const RunConfig& config, const JointAction& greens,
                        std::uint64_t seed) {
    config.validate();
    if (greens.size() != config.scenario.intersection_count())
        fail("greens", "size does not match intersection count");
    for (int g : greens)
        if (g < config.scenario.params.green_min_s ||
            g > config.scenario.params.green_max_s)
            fail("greens", "green time outside bounds");
    return policy_rollout(
        config, config.uncertainty, [&](const NetworkState&, int) -> const JointAction& {
            return greens;
        },
        config.agent.horizon, seed, streams::kGreedyEnv);
}

OracleResult oracle_search(const RunConfig& config, const std::vector<JointAction>& actions,
                           int horizon, OracleMode mode, std::uint64_t budget) {
    config.validate();
    if (actions.empty()) fail("oracle", "empty action list");
    if (config.uncertainty.demand_pct != 0 || config.uncertainty.turning_pct != 0 ||
        config.uncertainty.disturbance_std != 0)
        fail("oracle", "requires a deterministic scenario (all variances zero)");

    std::uint64_t total = 1;
    const int repetitions = mode == OracleMode::action_sequence ? horizon : 1;
    for (int k = 0; k < repetitions; ++k) {
        if (total > budget / actions.size()) {
            total = budget + 1;
            break;
        }
        total *= actions.size();
    }
    if (total > budget)
        throw std::runtime_error("oracle: enumeration exceeds budget of " +
                                 std::to_string(budget) + " rollouts");

    OracleResult result;
    result.best_cost = std::numeric_limits<double>::infinity();
    result.worst_cost = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> seq(mode == OracleMode::action_sequence ? horizon : 1, 0);
    bool done = false;
    while (!done) {
        const auto pick = [&](const NetworkState&, int k) -> const JointAction& {
            return actions[seq[mode == OracleMode::action_sequence ? k : 0]];
        };
        const RunTrace trace =
            policy_rollout(config, config.uncertainty, pick, horizon, 0, 0);
        const double cost = trace.total_cost();
        ++result.evaluated;

        const auto materialize = [&] {
            std::vector<JointAction> out;
            for (std::size_t idx : seq) out.push_back(actions[idx]);
            return out;
        };
        if (cost < result.best_cost) {
            result.best_cost = cost;
            result.best_actions = materialize();
            result.best_overflow = trace.any_overflow();
        }
        if (cost > result.worst_cost) {
            result.worst_cost = cost;
            result.worst_actions = materialize();
            result.worst_overflow = trace.any_overflow();
        }

        done = true;
        for (std::size_t i = seq.size(); i-- > 0;) {
            if (++seq[i] < actions.size()) {
                done = false;
                break;
            }
            seq[i] = 0;
        }
    }
    return result;
}

SweepResult sweep_uncertainty(const RunConfig& config, const Controller& controller,
                              SweepAxis axis, const std::vector<double>& pct_list,
                              int n_seeds, std::uint64_t seed) {
    config.validate();
    if (controller.actions.empty()) fail("sweep", "controller has no actions");
    if (n_seeds < 1) fail("sweep", "seeds must be positive");

    SweepResult result;
    result.axis = axis;
    for (std::size_t p = 0; p < pct_list.size(); ++p) {
        UncertaintyConfig cell = config.uncertainty;
        cell.demand_pct = axis == SweepAxis::demand ? pct_list[p] : 0.0;
        cell.turning_pct = axis == SweepAxis::turning ? pct_list[p] : 0.0;
        cell.disturbance_std = 0.0;

        SweepRow row;
        row.pct = pct_list[p];
        row.seeds = n_seeds;
        row.step_mean_cost.assign(config.agent.horizon, 0.0);
        int overflowed = 0;
        for (int s = 0; s < n_seeds; ++s) {
            const RunTrace trace = greedy_rollout(
                controller.qtable, config.scenario, config.reward, cell,
                controller.encoder, controller.actions, config.initial_state,
                config.agent.horizon, seed,
                streams::sweep_cell(p, static_cast<std::size_t>(n_seeds),
                                    static_cast<std::size_t>(s)));
            for (int k = 0; k < config.agent.horizon; ++k)
                row.step_mean_cost[k] += -trace.steps[k].reward;
            if (trace.any_overflow()) ++overflowed;
        }
        for (double& c : row.step_mean_cost) c /= n_seeds;
        row.overflow_frac = static_cast<double>(overflowed) / n_seeds;
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace trafficrl
