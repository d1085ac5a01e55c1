#include "trafficrl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace trafficrl {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw std::invalid_argument(field + ": " + message);
}

}  // namespace

RoadKind road_kind_from_string(const std::string& s) {
    if (s == "entry") return RoadKind::entry;
    if (s == "internal") return RoadKind::internal;
    if (s == "exit") return RoadKind::exit;
    fail("roads[].kind", "unknown kind '" + s + "' (expected entry|internal|exit)");
}

std::string to_string(RoadKind kind) {
    switch (kind) {
        case RoadKind::entry: return "entry";
        case RoadKind::internal: return "internal";
        case RoadKind::exit: return "exit";
    }
    return "?";
}

Phase phase_from_string(const std::string& s) {
    if (s == "green") return Phase::green;
    if (s == "cross") return Phase::cross;
    fail("roads[].phase", "unknown phase '" + s + "' (expected green|cross)");
}

std::string to_string(Phase phase) {
    return phase == Phase::green ? "green" : "cross";
}

TurnMatrix::TurnMatrix(std::size_t road_count)
    : n_(road_count), tau_(road_count * road_count, 0.0), dests_(road_count),
      srcs_(road_count) {}

void TurnMatrix::set(int from, int to, double fraction) {
    double& cell = tau_[index(from, to)];
    if (cell == 0.0 && fraction != 0.0) {
        dests_[from].insert(
            std::lower_bound(dests_[from].begin(), dests_[from].end(), to), to);
        srcs_[to].insert(
            std::lower_bound(srcs_[to].begin(), srcs_[to].end(), from), from);
    }
    cell = fraction;
}

double TurnMatrix::row_sum(int from) const {
    double sum = 0.0;
    for (int to : dests_[from]) sum += at(from, to);
    return sum;
}

int Scenario::road_index(const std::string& id) const {
    for (std::size_t i = 0; i < roads.size(); ++i)
        if (roads[i].id == id) return static_cast<int>(i);
    return -1;
}

int Scenario::intersection_pos(int intersection_id) const {
    for (std::size_t i = 0; i < intersections.size(); ++i)
        if (intersections[i].id == intersection_id) return static_cast<int>(i);
    return -1;
}

void Scenario::finalize() {
    if (roads.empty()) fail("roads", "at least one road required");
    if (intersections.empty()) fail("intersections", "at least one intersection required");
    if (params.cycle_s <= 0) fail("params.cycle_s", "must be strictly positive");
    if (params.interval_s <= 0) fail("params.interval_s", "must be strictly positive");
    if (params.saturation_veh_h <= 0)
        fail("params.saturation_veh_h", "must be strictly positive");
    if (params.vehicle_length_m <= 0)
        fail("params.vehicle_len_m", "must be strictly positive");
    if (params.green_min_s <= 0) fail("params.green_min_s", "must be strictly positive");
    if (params.green_min_s > params.green_max_s)
        fail("params.green_min_s", "exceeds green_max_s");
    if (params.green_max_s > params.cycle_s)
        fail("params.green_max_s", "exceeds cycle_s");

    for (std::size_t i = 0; i < roads.size(); ++i) {
        const auto& road = roads[i];
        const std::string field = "roads[" + std::to_string(i) + "]";
        if (road.id.empty()) fail(field + ".id", "empty id");
        for (std::size_t j = 0; j < i; ++j)
            if (roads[j].id == road.id) fail(field + ".id", "duplicate id '" + road.id + "'");
        if (road.length_m <= 0) fail(field + ".length_m", "must be strictly positive");
        if (intersection_pos(road.intersection) < 0)
            fail(field + ".intersection",
                 "unknown intersection id " + std::to_string(road.intersection));
    }

    for (std::size_t i = 0; i < intersections.size(); ++i) {
        const auto& inter = intersections[i];
        const std::string field = "intersections[" + std::to_string(i) + "]";
        for (std::size_t j = 0; j < i; ++j)
            if (intersections[j].id == inter.id)
                fail(field + ".id", "duplicate id " + std::to_string(inter.id));
        for (int r : inter.incoming)
            if (r < 0 || r >= static_cast<int>(roads.size()))
                fail(field + ".incoming", "road index out of range");
        for (int r : inter.outgoing)
            if (r < 0 || r >= static_cast<int>(roads.size()))
                fail(field + ".outgoing", "road index out of range");
    }

    if (turning.road_count() != roads.size())
        fail("turning", "matrix size does not match road count");
    if (demand_mean_veh_s.size() != roads.size())
        fail("demand", "vector size does not match road count");

    for (std::size_t p = 0; p < roads.size(); ++p) {
        const int from = static_cast<int>(p);
        const std::string field = "turning[" + roads[p].id + "]";
        if (roads[p].kind == RoadKind::exit) {
            if (!turning.destinations(from).empty())
                fail(field, "exit roads discharge out of the network, row must be empty");
            continue;
        }
        const double sum = turning.row_sum(from);
        if (std::abs(sum - 1.0) > 1e-9)
            fail(field, "row sums to " + std::to_string(sum) + ", expected 1");
        for (int to : turning.destinations(from)) {
            const double tau = turning.at(from, to);
            if (tau < 0.0 || tau > 1.0) fail(field, "fraction outside [0,1]");
            if (roads[to].kind == RoadKind::entry)
                fail(field, "routes into entry road '" + roads[to].id + "'");
            if (to == from) fail(field, "routes a road into itself");
        }
    }

    for (std::size_t r = 0; r < roads.size(); ++r) {
        const std::string field = "demand[" + roads[r].id + "]";
        if (demand_mean_veh_s[r] < 0) fail(field, "negative demand");
        if (roads[r].kind != RoadKind::entry && demand_mean_veh_s[r] != 0.0)
            fail(field, "demand allowed on entry roads only");
    }

    // Reachability: every non-entry road must see flow from some entry.
    std::vector<bool> reached(roads.size(), false);
    std::vector<int> frontier;
    for (std::size_t r = 0; r < roads.size(); ++r) {
        if (roads[r].kind == RoadKind::entry) {
            reached[r] = true;
            frontier.push_back(static_cast<int>(r));
        }
    }
    if (frontier.empty()) fail("roads", "no entry roads");
    while (!frontier.empty()) {
        const int from = frontier.back();
        frontier.pop_back();
        for (int to : turning.destinations(from)) {
            if (!reached[to] && turning.at(from, to) > 0.0) {
                reached[to] = true;
                frontier.push_back(to);
            }
        }
    }
    for (std::size_t r = 0; r < roads.size(); ++r)
        if (!reached[r])
            fail("roads[" + std::to_string(r) + "]",
                 "road '" + roads[r].id + "' unreachable from any entry");

    road_signal_pos.assign(roads.size(), -1);
    for (std::size_t r = 0; r < roads.size(); ++r)
        road_signal_pos[r] = intersection_pos(roads[r].intersection);
}

Scenario Scenario::from_json(const nlohmann::json& j) {
    Scenario scenario;
    scenario.name = j.value("name", std::string{});

    if (!j.contains("roads") || !j["roads"].is_array())
        fail("roads", "missing or not an array");

    // Intersections are declared implicitly by the roads that reference
    // them; incoming/outgoing lists are derived below.
    for (const auto& jr : j["roads"]) {
        RoadSpec road;
        road.id = jr.at("id").get<std::string>();
        road.length_m = jr.at("length_m").get<double>();
        road.kind = road_kind_from_string(jr.at("kind").get<std::string>());
        road.intersection = jr.at("intersection").get<int>();
        road.phase = phase_from_string(jr.value("phase", std::string{"green"}));
        scenario.roads.push_back(road);
    }

    std::vector<int> inter_ids;
    for (const auto& road : scenario.roads)
        if (std::find(inter_ids.begin(), inter_ids.end(), road.intersection) ==
            inter_ids.end())
            inter_ids.push_back(road.intersection);
    std::sort(inter_ids.begin(), inter_ids.end());
    for (int id : inter_ids) scenario.intersections.push_back({id, {}, {}});

    const std::size_t n = scenario.roads.size();
    scenario.turning = TurnMatrix(n);
    if (j.contains("turning")) {
        for (const auto& [src, row] : j["turning"].items()) {
            const int from = scenario.road_index(src);
            if (from < 0) fail("turning", "unknown source road '" + src + "'");
            for (const auto& [dst, rate] : row.items()) {
                const int to = scenario.road_index(dst);
                if (to < 0) fail("turning", "unknown destination road '" + dst + "'");
                scenario.turning.set(from, to, rate.get<double>());
            }
        }
    }

    if (j.contains("params")) {
        const auto& p = j["params"];
        auto& params = scenario.params;
        params.cycle_s = p.value("cycle_s", params.cycle_s);
        params.interval_s = p.value("interval_s", params.interval_s);
        params.saturation_veh_h = p.value("saturation_veh_h", params.saturation_veh_h);
        params.vehicle_length_m = p.value("vehicle_len_m", params.vehicle_length_m);
        params.green_min_s = p.value("green_min_s", params.green_min_s);
        params.green_max_s = p.value("green_max_s", params.green_max_s);
    }

    scenario.demand_mean_veh_s.assign(n, 0.0);
    if (j.contains("demand")) {
        for (const auto& [road_id, mean] : j["demand"].items()) {
            const int r = scenario.road_index(road_id);
            if (r < 0) fail("demand", "unknown road '" + road_id + "'");
            scenario.demand_mean_veh_s[r] = mean.get<double>();
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        const int pos = scenario.intersection_pos(scenario.roads[r].intersection);
        scenario.intersections[pos].incoming.push_back(static_cast<int>(r));
    }
    for (std::size_t p = 0; p < n; ++p)
        for (int to : scenario.turning.destinations(static_cast<int>(p)))
            scenario.intersections[scenario.intersection_pos(scenario.roads[p].intersection)]
                .outgoing.push_back(to);

    scenario.finalize();
    return scenario;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("scenario", "cannot open file '" + path + "'");
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

}  // namespace trafficrl
