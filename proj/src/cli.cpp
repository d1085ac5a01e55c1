#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trafficrl/harness.hpp"

namespace trafficrl {

namespace {

std::vector<double> parse_pcts(const std::string& csv) {
    std::vector<double> pcts;
    std::istringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) pcts.push_back(std::stod(item));
    if (pcts.empty()) throw CLI::ValidationError("--pcts", "no percentages given");
    return pcts;
}

JointAction parse_greens(const std::string& csv, std::size_t intersections) {
    JointAction greens;
    std::istringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) greens.push_back(std::stoi(item));
    if (greens.size() != intersections)
        throw CLI::ValidationError(
            "--greens", "expected " + std::to_string(intersections) + " values");
    return greens;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

Controller make_controller(const RunConfig& config, const std::string& kind,
                           std::uint64_t seed, const std::string& greens_csv) {
    Controller controller;
    controller.encoder = config.encoder;
    if (kind == "regular") {
        RegularResult r = run_regular(config, seed);
        controller.qtable = std::move(r.qtable);
        controller.actions = std::move(r.actions);
    } else if (kind == "adaptive") {
        AdaptiveRunResult r = run_adaptive(config, seed);
        controller.qtable = std::move(r.adaptive.qtable);
        controller.actions = std::move(r.adaptive.actions);
    } else {  // fixed: a one-action table, the rollout is the constant policy
        JointAction greens;
        if (greens_csv.empty())
            greens.assign(config.scenario.intersection_count(),
                          (config.scenario.params.green_min_s +
                           config.scenario.params.green_max_s) /
                              2);
        else
            greens = parse_greens(greens_csv, config.scenario.intersection_count());
        controller.qtable = QTable(1);
        controller.actions = {greens};
    }
    return controller;
}

int run_simulate(const std::string& scenario_path, const std::string& controller_kind,
                 std::uint64_t seed, const std::string& out_dir,
                 const std::string& greens_csv) {
    const RunConfig config = RunConfig::from_file(scenario_path);
    std::filesystem::create_directories(out_dir);

    nlohmann::json extra{{"command", "simulate"}, {"controller", controller_kind}};
    if (controller_kind == "regular") {
        RegularResult result = run_regular(config, seed);
        write_trace_csv(join_path(out_dir, "trace.csv"), config.scenario, result.trace);
        result.qtable.save_csv(join_path(out_dir, "qtable.csv"));
        extra["total_cost"] = result.trace.total_cost();
        extra["overflow"] = result.trace.any_overflow();
    } else if (controller_kind == "adaptive") {
        AdaptiveRunResult result = run_adaptive(config, seed);
        write_trace_csv(join_path(out_dir, "trace.csv"), config.scenario, result.trace);
        write_generations_csv(join_path(out_dir, "generations.csv"),
                              result.adaptive.log);
        result.adaptive.qtable.save_csv(join_path(out_dir, "qtable.csv"));
        auto intervals = nlohmann::json::array();
        for (const auto& iv : result.adaptive.grid.intervals)
            intervals.push_back({iv.lo, iv.hi});
        extra["final_intervals"] = intervals;
        extra["total_cost"] = result.trace.total_cost();
        extra["overflow"] = result.trace.any_overflow();
    } else if (controller_kind == "fixed") {
        JointAction greens;
        if (greens_csv.empty())
            greens.assign(config.scenario.intersection_count(),
                          (config.scenario.params.green_min_s +
                           config.scenario.params.green_max_s) /
                              2);
        else
            greens = parse_greens(greens_csv, config.scenario.intersection_count());
        const RunTrace trace = run_fixed_time(config, greens, seed);
        write_trace_csv(join_path(out_dir, "trace.csv"), config.scenario, trace);
        extra["greens"] = greens;
        extra["total_cost"] = trace.total_cost();
        extra["overflow"] = trace.any_overflow();
    }
    write_run_meta(join_path(out_dir, "run_meta.json"), config, seed, extra);
    std::cout << "simulate: wrote " << out_dir << " (total cost "
              << extra["total_cost"].get<double>() << ")\n";
    return 0;
}

int run_sweep(const std::string& scenario_path, const std::string& axis_name,
              const std::string& pcts_csv, int n_seeds,
              const std::string& controller_kind, std::uint64_t seed,
              const std::string& out_dir, const std::string& greens_csv) {
    const RunConfig config = RunConfig::from_file(scenario_path);
    std::filesystem::create_directories(out_dir);
    const SweepAxis axis =
        axis_name == "demand" ? SweepAxis::demand : SweepAxis::turning;
    const std::vector<double> pcts = parse_pcts(pcts_csv);

    const Controller controller =
        make_controller(config, controller_kind, seed, greens_csv);
    const SweepResult result =
        sweep_uncertainty(config, controller, axis, pcts, n_seeds, seed);
    write_sweep_csv(join_path(out_dir, "sweep.csv"), result);
    // Single-seed table, same shape, for eyeballing one run per row.
    const SweepResult single = sweep_uncertainty(config, controller, axis, pcts, 1, seed);
    write_sweep_csv(join_path(out_dir, "sweep_single.csv"), single);

    write_run_meta(join_path(out_dir, "run_meta.json"), config, seed,
                   {{"command", "sweep"},
                    {"axis", axis_name},
                    {"controller", controller_kind},
                    {"pcts", pcts},
                    {"sweep_seeds", n_seeds}});
    std::cout << "sweep: wrote " << out_dir << "\n";
    return 0;
}

int run_oracle(const std::string& scenario_path, const std::string& mode_name,
               int horizon, std::uint64_t budget, bool all_integer_greens,
               const std::string& out_dir) {
    const RunConfig config = RunConfig::from_file(scenario_path);
    const OracleMode mode = mode_name == "fixed_action" ? OracleMode::fixed_action
                                                        : OracleMode::action_sequence;
    std::vector<JointAction> actions;
    if (all_integer_greens) {
        ActionGrid grid = ActionGrid::full(config.scenario,
                                           config.scenario.params.green_max_s -
                                               config.scenario.params.green_min_s + 1);
        actions = build_actions(grid);
    } else {
        actions = build_actions(
            ActionGrid::full(config.scenario, config.horizon.values_per_intersection));
    }
    const int h = horizon > 0 ? horizon : config.agent.horizon;
    const OracleResult result = oracle_search(config, actions, h, mode, budget);

    nlohmann::json j{{"mode", mode_name},
                     {"horizon", h},
                     {"evaluated", result.evaluated},
                     {"best_cost", result.best_cost},
                     {"best_actions", result.best_actions},
                     {"best_overflow", result.best_overflow},
                     {"worst_cost", result.worst_cost},
                     {"worst_actions", result.worst_actions},
                     {"worst_overflow", result.worst_overflow}};
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(join_path(out_dir, "oracle.json"));
        out << j.dump(2) << '\n';
        write_run_meta(join_path(out_dir, "run_meta.json"), config, 0,
                       {{"command", "oracle"}, {"mode", mode_name}});
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Store-and-forward traffic network simulator with tabular "
                 "Q-learning signal control"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", controller = "regular";
    std::uint64_t seed = 1;
    std::string greens_csv;

    auto* simulate = app.add_subcommand("simulate", "Train a controller and write its trace");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--controller", controller, "regular|adaptive|fixed")
        ->check(CLI::IsMember({"regular", "adaptive", "fixed"}));
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--greens", greens_csv,
                         "Fixed green seconds per intersection, comma separated");

    std::string axis = "demand", pcts = "5,10,20,30,40";
    int sweep_seeds = 20;
    auto* sweep = app.add_subcommand("sweep", "Uncertainty sweep over a trained controller");
    sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--axis", axis, "demand|turning")
        ->check(CLI::IsMember({"demand", "turning"}));
    sweep->add_option("--pcts", pcts, "Comma-separated uncertainty percentages");
    sweep->add_option("--seeds", sweep_seeds, "Rollout seeds per percentage");
    sweep->add_option("--controller", controller, "regular|adaptive|fixed")
        ->check(CLI::IsMember({"regular", "adaptive", "fixed"}));
    sweep->add_option("--seed", seed, "Master seed (controller training and rollouts)");
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--greens", greens_csv,
                      "Fixed green seconds per intersection, comma separated");

    std::string mode = "fixed_action", oracle_out;
    int horizon = 0;
    std::uint64_t budget = 2'000'000;
    bool all_integer = false;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive search on a deterministic scenario");
    oracle->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    oracle->add_option("--mode", mode, "fixed_action|action_sequence")
        ->check(CLI::IsMember({"fixed_action", "action_sequence"}));
    oracle->add_option("--horizon", horizon, "Steps (default: agent horizon)");
    oracle->add_option("--budget", budget, "Maximum rollouts");
    oracle->add_flag("--all-integer-greens", all_integer,
                     "Enumerate every integer green time instead of the action grid");
    oracle->add_option("--out", oracle_out, "Output directory (optional)");

    try {
        app.parse(argc, argv);
        if (simulate->parsed())
            return run_simulate(scenario_path, controller, seed, out_dir, greens_csv);
        if (sweep->parsed())
            return run_sweep(scenario_path, axis, pcts, sweep_seeds, controller, seed,
                             out_dir, greens_csv);
        if (oracle->parsed())
            return run_oracle(scenario_path, mode, horizon, budget, all_integer,
                              oracle_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace trafficrl
