#include "trafficrl/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace trafficrl {

void StateEncoder::validate(std::size_t road_count) const {
    if (bin_width < 1.0)
        throw std::invalid_argument("encoder.bin_width: must be at least 1 vehicle");
    if (max_bins < 1) throw std::invalid_argument("encoder.max_bins: must be positive");
    if (monitored.empty())
        throw std::invalid_argument("encoder.monitored: at least one road required");
    for (int r : monitored)
        if (r < 0 || r >= static_cast<int>(road_count))
            throw std::invalid_argument("encoder.monitored: road index out of range");
    // Injectivity over the binned grid needs the packed id to fit 64 bits.
    const double radix = static_cast<double>(max_bins) + 1.0;
    const double bits = static_cast<double>(monitored.size()) * std::log2(radix);
    if (bits > 63.0)
        throw std::invalid_argument(
            "encoder: monitored roads x bins exceed 64-bit id space");
}

void AgentParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("agent.alpha: must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("agent.gamma: must be in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("agent.epsilon: must be in [0, 1]");
    if (episodes < 0) throw std::invalid_argument("agent.episodes: must be non-negative");
    if (horizon < 1) throw std::invalid_argument("agent.horizon: must be at least 1");
    if (!(epsilon_final >= 0.0 && epsilon_final <= 1.0))
        throw std::invalid_argument("agent.epsilon_final: must be in [0, 1]");
}

std::uint64_t encode_state(const NetworkState& state, const StateEncoder& encoder) {
    const std::uint64_t radix = static_cast<std::uint64_t>(encoder.max_bins) + 1;
    std::uint64_t id = 0;
    std::uint64_t place = 1;
    for (int r : encoder.monitored) {
        const int bin = std::min(encoder.max_bins,
                                 static_cast<int>(state.queues[r] / encoder.bin_width));
        id += static_cast<std::uint64_t>(bin) * place;
        place *= radix;
    }
    return id;
}

std::uint32_t select_action(const QTable& qtable, std::uint64_t state,
                            std::size_t action_count, double epsilon, StepRng& rng) {
    if (action_count == 0) throw std::invalid_argument("select_action: empty action list");
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return static_cast<std::uint32_t>(rng.uniform_below(action_count));
    return qtable.best(state).first;
}

void update(QTable& qtable, std::uint64_t s, std::uint32_t a, double r,
            std::uint64_t s_next, double alpha, double gamma, bool terminal,
            UpdateRule rule) {
    const double q = qtable.get(s, a);
    const double bootstrap = terminal ? 0.0 : qtable.max_value(s_next);
    double delta;
    if (rule == UpdateRule::standard)
        delta = r + gamma * bootstrap - q;
    else
        delta = r + gamma * (bootstrap - q);
    qtable.set(s, a, q + alpha * delta);
}

namespace {

double annealed_epsilon(const AgentParams& params, int episode) {
    if (!params.anneal_epsilon || params.episodes <= 1) return params.epsilon;
    const double t = static_cast<double>(episode) / (params.episodes - 1);
    return params.epsilon + (params.epsilon_final - params.epsilon) * t;
}

NetworkState step_forward(const Scenario& scenario, const NetworkState& state,
                          const JointAction& action, const EnvSampler::Sample& sample) {
    return step(scenario, state, action, *sample.demand, *sample.turning,
                *sample.disturbance);
}

}  // namespace

TrainResult train(const Scenario& scenario, const RewardParams& reward_params,
                  const UncertaintyConfig& uncertainty, const AgentParams& params,
                  const StateEncoder& encoder, const std::vector<JointAction>& actions,
                  const NetworkState& initial, std::uint64_t seed,
                  std::uint64_t policy_stream, std::uint64_t env_stream) {
    if (actions.empty()) throw std::invalid_argument("train: empty action list");
    params.validate();
    encoder.validate(scenario.road_count());

    TrainResult result;
    result.qtable = QTable(actions.size());
    result.stats.episode_return.reserve(params.episodes);

    const std::vector<double> capacities = road_capacities(scenario);
    EnvSampler env(scenario, uncertainty, seed, env_stream);
    std::uint64_t global_step = 0;

    for (int episode = 0; episode < params.episodes; ++episode) {
        const double epsilon = annealed_epsilon(params, episode);
        NetworkState state = initial;
        std::uint64_t s = encode_state(state, encoder);
        const JointAction* prev_action = nullptr;
        double episode_return = 0.0;
        double discount = 1.0;

        for (int step = 0; step < params.horizon; ++step, ++global_step) {
            StepRng policy_rng(seed, policy_stream, global_step);
            const std::uint32_t a = select_action(result.qtable, s, actions.size(),
                                                  epsilon, policy_rng);
            const JointAction& action = actions[a];
            const auto sample = env.sample(global_step);
            NetworkState next_state = step_forward(scenario, state, action, sample);
            const double r = reward(next_state, action,
                                    prev_action ? *prev_action : action, capacities,
                                    reward_params);
            const std::uint64_t s_next = encode_state(next_state, encoder);
            const bool terminal = step + 1 == params.horizon;
            update(result.qtable, s, a, r, s_next, params.alpha, params.gamma, terminal,
                   params.update_rule);
            ++result.stats.updates;

            episode_return += discount * r;
            discount *= params.gamma;
            state = std::move(next_state);
            s = s_next;
            prev_action = &action;
        }
        result.stats.episode_return.push_back(episode_return);
    }
    return result;
}

RunTrace greedy_rollout(const QTable& qtable, const Scenario& scenario,
                        const RewardParams& reward_params,
                        const UncertaintyConfig& uncertainty,
                        const StateEncoder& encoder,
                        const std::vector<JointAction>& actions,
                        const NetworkState& initial, int horizon, std::uint64_t seed,
                        std::uint64_t env_stream, int forced_first) {
    if (actions.empty())
        throw std::invalid_argument("greedy_rollout: empty action list");
    const std::vector<double> capacities = road_capacities(scenario);
    EnvSampler env(scenario, uncertainty, seed, env_stream);

    RunTrace trace;
    trace.steps.reserve(horizon);
    NetworkState state = initial;
    JointAction prev_action;

    for (int step = 0; step < horizon; ++step) {
        std::uint32_t a;
        if (step == 0 && forced_first >= 0)
            a = static_cast<std::uint32_t>(forced_first);
        else
            a = qtable.best(encode_state(state, encoder)).first;
        const JointAction& action = actions[a];
        const auto sample = env.sample(static_cast<std::uint64_t>(step));
        NetworkState next_state = step_forward(scenario, state, action, sample);
        const JointAction& prev = step == 0 ? action : prev_action;

        TraceStep ts;
        ts.reward = reward(next_state, action, prev, capacities, reward_params);
        ts.cost = control_cost(next_state, action, prev, reward_params);
        const auto over = overflow_vector(next_state, capacities);
        ts.overflow.resize(over.size());
        for (std::size_t r = 0; r < over.size(); ++r) ts.overflow[r] = over[r] > 0.0;
        ts.action = action;
        ts.state = std::move(next_state);

        state = ts.state;
        prev_action = action;
        trace.steps.push_back(std::move(ts));
    }
    return trace;
}

}  // namespace trafficrl
