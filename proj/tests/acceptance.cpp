// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures. Heavier fixtures (the ten paired
// corridor runs) are computed once and shared by the criteria that read them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "trafficrl/harness.hpp"

using namespace trafficrl;

namespace {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

void progress(const std::string& message) {
    std::fprintf(stderr, "... %s\n", message.c_str());
}

// ---------------------------------------------------------------------------

Outcome check_dynamics_oracle() {
    Timer timer;
    const Scenario scenario = testsupport::two_road_scenario();
    const std::vector<double> zeros(2, 0.0);
    const std::vector<double> demand{0.3, 0.0};
    const int greens[6] = {60, 30, 90, 30, 45, 30};
    const double expect_e[6] = {10.0, 20.0, 0.0, 10.0, 0.0, 10.0};
    const double expect_x[6] = {30.0, 30.0, 0.0, 0.0, 0.0, 0.0};

    NetworkState state;
    state.queues = {50.0, 30.0};
    double max_err = 0.0;
    for (int k = 0; k < 6; ++k) {
        state = step(scenario, state, {greens[k]}, demand, scenario.turning, zeros);
        max_err = std::max(max_err, std::abs(state.queues[0] - expect_e[k]));
        max_err = std::max(max_err, std::abs(state.queues[1] - expect_x[k]));
    }

    Outcome out;
    out.name = "dynamics-oracle";
    out.seconds = timer.seconds();
    out.pass = max_err < 1e-9 && out.seconds < 1.0;
    out.detail = fmt("max queue error %.2e over 6 hand-computed steps", max_err);
    return out;
}

Outcome check_q_learning_fixed_point() {
    Timer timer;
    const double stay[2] = {0.8, 0.3};
    const double R[2][2] = {{-1.0, -0.4}, {-2.0, -0.25}};
    const double gamma = 0.9;

    double qstar[2][2] = {{0, 0}, {0, 0}};
    for (int it = 0; it < 600; ++it) {
        double next[2][2];
        for (int s = 0; s < 2; ++s) {
            const double v_s = std::max(qstar[s][0], qstar[s][1]);
            const double v_o = std::max(qstar[1 - s][0], qstar[1 - s][1]);
            for (int a = 0; a < 2; ++a)
                next[s][a] = R[s][a] + gamma * (stay[a] * v_s + (1 - stay[a]) * v_o);
        }
        std::copy(&next[0][0], &next[0][0] + 4, &qstar[0][0]);
    }

    QTable table(2);
    int visits[2][2] = {{0, 0}, {0, 0}};
    int s = 0;
    const std::uint64_t max_updates = 100000;
    for (std::uint64_t t = 0; t < max_updates; ++t) {
        StepRng rng(4242, 0, t);
        const int a = static_cast<int>(rng.uniform_below(2));
        const int s2 = rng.uniform01() < stay[a] ? s : 1 - s;
        const double alpha = 60.0 / (60.0 + ++visits[s][a]);
        update(table, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(a),
               R[s][a], static_cast<std::uint64_t>(s2), alpha, gamma);
        s = s2;
    }

    double sup = 0.0;
    for (int state = 0; state < 2; ++state)
        for (int a = 0; a < 2; ++a)
            sup = std::max(sup, std::abs(table.get(static_cast<std::uint64_t>(state),
                                                   static_cast<std::uint32_t>(a)) -
                                         qstar[state][a]));

    Outcome out;
    out.name = "q-learning-vs-value-iteration";
    out.seconds = timer.seconds();
    out.pass = sup <= 1e-2 && out.seconds < 10.0;
    out.detail = fmt("sup-norm gap %.4f after %llu updates", sup,
                     static_cast<unsigned long long>(max_updates));
    return out;
}

Outcome check_policy_optimality() {
    Timer timer;
    const RunConfig config =
        RunConfig::from_file(testsupport::data_file("toy_scenario.json"));
    const auto actions = build_actions(
        ActionGrid::full(config.scenario, config.horizon.values_per_intersection));
    const OracleResult oracle = oracle_search(config, actions, config.agent.horizon,
                                              OracleMode::action_sequence);

    int ok = 0;
    double worst_gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RegularResult result = run_regular(config, seed);
        const double gap = result.trace.total_cost() - oracle.best_cost;
        worst_gap = std::max(worst_gap, std::abs(gap));
        if (std::abs(gap) <= 1e-6) ++ok;
    }

    Outcome out;
    out.name = "policy-optimality";
    out.seconds = timer.seconds();
    out.pass = ok >= 9 && out.seconds < 60.0;
    out.detail = fmt("greedy rollout hit the exhaustive optimum in %d/10 seeds "
                     "(worst gap %.2e)",
                     ok, worst_gap);
    return out;
}

// Shared corridor-scale fixture: ten paired runs of both controllers.
struct CorridorRuns {
    RunConfig config;
    std::vector<AdaptiveRunResult> adaptive;  // seeds 1..10
    std::vector<double> regular_cost;
    double seconds = 0.0;
};

CorridorRuns run_corridor() {
    Timer timer;
    CorridorRuns runs;
    runs.config = RunConfig::from_file(testsupport::data_file("default_scenario.json"));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        progress(fmt("corridor seed %llu/10", static_cast<unsigned long long>(seed)));
        runs.adaptive.push_back(run_adaptive(runs.config, seed));
        runs.regular_cost.push_back(run_regular(runs.config, seed).trace.total_cost());
    }
    runs.seconds = timer.seconds();
    return runs;
}

Outcome check_subset_chain(const CorridorRuns& runs) {
    Timer timer;
    int violations = 0;
    const int n_values = runs.config.horizon.values_per_intersection;
    const std::size_t expected_joint =
        build_actions(ActionGrid::full(runs.config.scenario, n_values)).size();

    for (const auto& run : runs.adaptive) {
        std::map<int, std::vector<GenerationRecord>> by_gen;
        for (const auto& rec : run.adaptive.log) by_gen[rec.generation].push_back(rec);

        // Joint action count holds for every generation, shifts included.
        for (const auto& [g, rows] : by_gen) {
            ActionGrid grid;
            grid.values_per_intersection = n_values;
            for (const auto& rec : rows) grid.intervals.push_back({rec.lo, rec.hi});
            if (build_actions(grid).size() != expected_joint) ++violations;
        }

        // Contraction generations nest until every spacing bottoms out.
        int g = 1;
        for (; by_gen.count(g); ++g) {
            const auto& prev = by_gen[g - 1];
            const auto& cur = by_gen[g];
            bool nested = true;
            for (std::size_t i = 0; i < cur.size(); ++i)
                nested = nested && cur[i].lo >= prev[i].lo && cur[i].hi <= prev[i].hi;
            if (!nested) break;
        }
        for (const auto& rec : by_gen[g - 1])
            if (rec.spacing != runs.config.horizon.min_spacing) ++violations;
    }

    Outcome out;
    out.name = "interval-subset-chain";
    out.seconds = timer.seconds();
    out.pass = violations == 0;
    out.detail = fmt("%d violations across %zu adaptive runs", violations,
                     runs.adaptive.size());
    return out;
}

Outcome check_adaptive_beats_regular(const CorridorRuns& runs) {
    int wins = 0;
    double adaptive_total = 0.0;
    double regular_total = 0.0;
    for (std::size_t i = 0; i < runs.adaptive.size(); ++i) {
        const double a = runs.adaptive[i].trace.total_cost();
        const double r = runs.regular_cost[i];
        adaptive_total += a;
        regular_total += r;
        if (a <= r) ++wins;
    }

    Outcome out;
    out.name = "adaptive-beats-regular";
    out.seconds = runs.seconds;
    out.pass = wins >= 8 && runs.seconds < 600.0;
    out.detail = fmt("adaptive cost <= regular in %d/10 paired seeds "
                     "(mean cost %.2f vs %.2f)",
                     wins, adaptive_total / 10.0, regular_total / 10.0);
    return out;
}

Outcome check_final_interval_shape(const CorridorRuns& runs) {
    Timer timer;
    int bad = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        const ActionGrid& grid = runs.adaptive[i].adaptive.grid;
        for (std::size_t k = 0; k < grid.intervals.size(); ++k) {
            const auto& iv = grid.intervals[k];
            if (iv.hi - iv.lo > 10 || grid.spacing(static_cast<int>(k)) != 1) ++bad;
        }
    }

    Outcome out;
    out.name = "final-interval-shape";
    out.seconds = timer.seconds();
    out.pass = bad == 0;
    out.detail = fmt("%d intervals out of shape on 5 seeds "
                     "(want width <= 10s at 1s spacing)",
                     bad);
    return out;
}

Outcome check_zero_overflow(const CorridorRuns& runs) {
    Timer timer;
    int clean = 0;
    for (const auto& run : runs.adaptive)
        if (!run.trace.any_overflow()) ++clean;

    Outcome out;
    out.name = "zero-overflow";
    out.seconds = timer.seconds();
    out.pass = clean >= 9;
    out.detail = fmt("no overflow in %d/10 adaptive rollouts", clean);
    return out;
}

Outcome check_robustness_thresholds(const CorridorRuns& runs) {
    Timer timer;
    Controller controller;
    controller.qtable = runs.adaptive[0].adaptive.qtable;
    controller.actions = runs.adaptive[0].adaptive.actions;
    controller.encoder = runs.config.encoder;

    progress("robustness sweeps (demand, turning)");
    const SweepResult demand = sweep_uncertainty(runs.config, controller,
                                                 SweepAxis::demand, {30, 40}, 20, 1);
    const SweepResult turning = sweep_uncertainty(runs.config, controller,
                                                  SweepAxis::turning, {15, 30}, 20, 1);
    const double d30 = demand.rows[0].overflow_frac;
    const double d40 = demand.rows[1].overflow_frac;
    const double t15 = turning.rows[0].overflow_frac;
    const double t30 = turning.rows[1].overflow_frac;

    Outcome out;
    out.name = "robustness-thresholds";
    out.seconds = timer.seconds();
    out.pass = d30 <= 0.10 && d40 >= 0.50 && t15 <= 0.10 && t30 >= 0.50 &&
               out.seconds < 1200.0;
    out.detail = fmt("overflow fraction: demand 30%%=%.2f (<=0.10), 40%%=%.2f "
                     "(>=0.50); turning 15%%=%.2f (<=0.10), 30%%=%.2f (>=0.50)",
                     d30, d40, t15, t30);
    return out;
}

Outcome check_csv_determinism() {
    Timer timer;
    const std::string scenario = testsupport::data_file("toy_scenario.json");
    int mismatches = 0;
    std::string checked;

    const auto compare = [&](const std::vector<std::string>& args,
                             const std::vector<std::string>& files, const char* tag) {
        testsupport::TempDir a(std::string("acc_") + tag + "_a");
        testsupport::TempDir b(std::string("acc_") + tag + "_b");
        for (const auto& dir : {a.str(), b.str()}) {
            std::vector<const char*> argv;
            argv.push_back("trafficrl");
            for (const auto& arg : args) argv.push_back(arg.c_str());
            argv.push_back("--out");
            argv.push_back(dir.c_str());
            std::ostringstream discard;
            std::streambuf* old = std::cout.rdbuf(discard.rdbuf());
            const int rc = cli_main(static_cast<int>(argv.size()), argv.data());
            std::cout.rdbuf(old);
            if (rc != 0) {
                ++mismatches;
                return;
            }
        }
        for (const auto& f : files)
            if (!testsupport::same_bytes(a.file(f), b.file(f))) ++mismatches;
        checked += std::string(checked.empty() ? "" : ", ") + tag;
    };

    compare({"simulate", "--scenario", scenario, "--controller", "regular",
             "--seed", "5"},
            {"trace.csv", "qtable.csv"}, "regular");
    compare({"simulate", "--scenario", scenario, "--controller", "adaptive",
             "--seed", "5"},
            {"trace.csv", "qtable.csv", "generations.csv"}, "adaptive");
    compare({"sweep", "--scenario", scenario, "--axis", "demand", "--pcts",
             "10,40", "--seeds", "8", "--controller", "fixed", "--greens", "60",
             "--seed", "2"},
            {"sweep.csv", "sweep_single.csv"}, "sweep");

    Outcome out;
    out.name = "csv-determinism";
    out.seconds = timer.seconds();
    out.pass = mismatches == 0;
    out.detail = fmt("re-ran %s: %d byte mismatches", checked.c_str(), mismatches);
    return out;
}

}  // namespace

int main() {
    std::vector<Outcome> outcomes;
    outcomes.push_back(check_dynamics_oracle());
    outcomes.push_back(check_q_learning_fixed_point());
    outcomes.push_back(check_policy_optimality());

    const CorridorRuns runs = run_corridor();
    outcomes.push_back(check_subset_chain(runs));
    outcomes.push_back(check_adaptive_beats_regular(runs));
    outcomes.push_back(check_final_interval_shape(runs));
    outcomes.push_back(check_zero_overflow(runs));
    outcomes.push_back(check_robustness_thresholds(runs));
    outcomes.push_back(check_csv_determinism());

    int failures = 0;
    for (const auto& out : outcomes) {
        if (!out.pass) ++failures;
        std::printf("%s  %-30s %s (%.2fs)\n", out.pass ? "PASS" : "FAIL",
                    out.name.c_str(), out.detail.c_str(), out.seconds);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
                outcomes.size());
    return failures;
}
