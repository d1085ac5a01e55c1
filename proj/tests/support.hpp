#pragma once

// Shared fixtures and file utilities for the test binaries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trafficrl/harness.hpp"

namespace testsupport {

inline std::string data_file(const char* name) {
    return std::string(TRAFFICRL_DATA_DIR) + "/" + name;
}

// Single intersection, one entry feeding one exit, both on the green phase.
// Small enough that every trajectory can be verified by hand.
inline trafficrl::Scenario two_road_scenario() {
    const auto j = nlohmann::json::parse(R"({
        "name": "two-road",
        "roads": [
            {"id": "e", "length_m": 600, "kind": "entry", "intersection": 1, "phase": "green"},
            {"id": "x", "length_m": 700, "kind": "exit", "intersection": 1, "phase": "green"}
        ],
        "turning": {"e": {"x": 1.0}},
        "params": {"cycle_s": 120, "interval_s": 200, "saturation_veh_h": 3600,
                   "vehicle_len_m": 5, "green_min_s": 30, "green_max_s": 90},
        "demand": {"e": 0.3}
    })");
    return trafficrl::Scenario::from_json(j);
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline bool same_bytes(const std::string& a, const std::string& b) {
    return slurp(a) == slurp(b);
}

// Fresh directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("trafficrl_" + tag + "_" + std::to_string(++counter));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testsupport
