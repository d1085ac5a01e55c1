#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace trafficrl {

enum class RoadKind { entry, internal, exit };

RoadKind road_kind_from_string(const std::string& s);
std::string to_string(RoadKind kind);

// Signals have two phases per cycle: roads on the green phase discharge for
// the chosen green time a, roads on the cross phase for the remainder
// cycle - a. The split is what makes green time a real trade-off at an
// intersection.
enum class Phase { green, cross };

Phase phase_from_string(const std::string& s);
std::string to_string(Phase phase);

struct RoadSpec {
    std::string id;
    double length_m = 0.0;
    RoadKind kind = RoadKind::internal;
    int intersection = -1;  // intersection whose signal gates this road
    Phase phase = Phase::green;
};

struct Intersection {
    int id = -1;
    std::vector<int> incoming;  // road indices discharging through this signal
    std::vector<int> outgoing;  // road indices fed by the discharged flow
};

// Fractions of discharged flow routed from one road to another. Rows of
// non-exit roads must sum to 1; exit rows are empty (vehicles leave).
class TurnMatrix {
public:
    TurnMatrix() = default;
    explicit TurnMatrix(std::size_t road_count);

    std::size_t road_count() const { return n_; }
    double at(int from, int to) const { return tau_[index(from, to)]; }
    void set(int from, int to, double fraction);

    // Nonzero destinations of a source row, ascending road index.
    const std::vector<int>& destinations(int from) const { return dests_[from]; }
    // Nonzero sources feeding a road, ascending road index.
    const std::vector<int>& sources(int to) const { return srcs_[to]; }
    double row_sum(int from) const;

private:
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to);
    }
    std::size_t n_ = 0;
    std::vector<double> tau_;
    std::vector<std::vector<int>> dests_;
    std::vector<std::vector<int>> srcs_;
};

struct ScenarioParams {
    double cycle_s = 120.0;
    double interval_s = 200.0;
    double saturation_veh_h = 3600.0;
    double vehicle_length_m = 5.0;
    int green_min_s = 30;
    int green_max_s = 90;
};

// Static description of the network: geometry, signal grouping, routing and
// nominal entry demand. Run-specific knobs (uncertainty, agent settings)
// live in RunConfig.
struct Scenario {
    std::string name;
    std::vector<RoadSpec> roads;
    std::vector<Intersection> intersections;
    TurnMatrix turning;
    ScenarioParams params;
    std::vector<double> demand_mean_veh_s;  // per road, zero on non-entries

    std::size_t road_count() const { return roads.size(); }
    std::size_t intersection_count() const { return intersections.size(); }
    double saturation_veh_s() const { return params.saturation_veh_h / 3600.0; }

    // Position in `intersections` of the signal discharging each road.
    // Derived; filled by finalize().
    std::vector<int> road_signal_pos;

    int road_index(const std::string& id) const;      // -1 if unknown
    int intersection_pos(int intersection_id) const;  // -1 if unknown

    // Validates every invariant (throws std::invalid_argument naming the
    // offending field) and fills the derived lookup tables. Must be called
    // after manual construction; from_json() already did.
    void finalize();

    static Scenario from_json(const nlohmann::json& j);
    static Scenario from_file(const std::string& path);
};

// A joint signal decision: green seconds per intersection, in the order the
// scenario lists the intersections.
using JointAction = std::vector<int>;

}  // namespace trafficrl
