#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trafficrl {

// Sparse tabular Q-function: (encoded state, action index) -> value, with
// unstored pairs reading as exactly 0. Rows keep their entries sorted by
// action index, so argmax scans are linear in the number of stored entries.
class QTable {
public:
    QTable() = default;
    explicit QTable(std::size_t action_count) : action_count_(action_count) {}

    std::size_t action_count() const { return action_count_; }
    std::size_t state_count() const { return rows_.size(); }
    std::size_t entry_count() const;

    double get(std::uint64_t state, std::uint32_t action) const;
    void set(std::uint64_t state, std::uint32_t action, double value);

    // (best action, best value) over the stored entries of a row; ties break
    // toward the lowest index. An unvisited state reads as (action 0, 0.0):
    // exploitation never reaches past what training has actually tried.
    std::pair<std::uint32_t, double> best(std::uint64_t state) const;
    double max_value(std::uint64_t state) const { return best(state).second; }

    // Flat CSV with header state_id,action_index,q_value; rows ordered by
    // (state, action) for byte-stable output.
    void save_csv(const std::string& path) const;
    static QTable load_csv(const std::string& path, std::size_t action_count);

    bool operator==(const QTable& other) const;

private:
    using Row = std::vector<std::pair<std::uint32_t, double>>;
    std::unordered_map<std::uint64_t, Row> rows_;
    std::size_t action_count_ = 0;
};

}  // namespace trafficrl
