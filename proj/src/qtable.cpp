#include "trafficrl/qtable.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trafficrl {

std::size_t QTable::entry_count() const {
    std::size_t count = 0;
    for (const auto& [state, row] : rows_) count += row.size();
    return count;
}

double QTable::get(std::uint64_t state, std::uint32_t action) const {
    const auto it = rows_.find(state);
    if (it == rows_.end()) return 0.0;
    const Row& row = it->second;
    const auto pos = std::lower_bound(
        row.begin(), row.end(), action,
        [](const auto& entry, std::uint32_t a) { return entry.first < a; });
    if (pos != row.end() && pos->first == action) return pos->second;
    return 0.0;
}

void QTable::set(std::uint64_t state, std::uint32_t action, double value) {
    Row& row = rows_[state];
    const auto pos = std::lower_bound(
        row.begin(), row.end(), action,
        [](const auto& entry, std::uint32_t a) { return entry.first < a; });
    if (pos != row.end() && pos->first == action)
        pos->second = value;
    else
        row.insert(pos, {action, value});
}

std::pair<std::uint32_t, double> QTable::best(std::uint64_t state) const {
    const auto it = rows_.find(state);
    if (it == rows_.end() || it->second.empty()) return {0, 0.0};
    const Row& row = it->second;

    // Entries are index-sorted, so strict > keeps the lowest index on ties.
    std::uint32_t best_action = row[0].first;
    double best_value = row[0].second;
    for (const auto& [action, value] : row) {
        if (value > best_value) {
            best_action = action;
            best_value = value;
        }
    }
    return {best_action, best_value};
}

void QTable::save_csv(const std::string& path) const {
    std::vector<std::uint64_t> states;
    states.reserve(rows_.size());
    for (const auto& [state, row] : rows_) states.push_back(state);
    std::sort(states.begin(), states.end());

    std::ofstream out(path);
    if (!out) throw std::runtime_error("qtable: cannot open '" + path + "' for writing");
    out << "state_id,action_index,q_value\n";
    char line[96];
    for (std::uint64_t state : states) {
        for (const auto& [action, value] : rows_.at(state)) {
            std::snprintf(line, sizeof line, "%" PRIu64 ",%u,%.17g\n", state, action,
                          value);
            out << line;
        }
    }
}

QTable QTable::load_csv(const std::string& path, std::size_t action_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("qtable: cannot open '" + path + "'");
    QTable table(action_count);
    std::string line;
    if (!std::getline(in, line) || line != "state_id,action_index,q_value")
        throw std::runtime_error("qtable: bad header in '" + path + "'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::uint64_t state;
        unsigned action;
        double value;
        if (std::sscanf(line.c_str(), "%" SCNu64 ",%u,%lf", &state, &action, &value) != 3)
            throw std::runtime_error("qtable: bad row '" + line + "'");
        table.set(state, static_cast<std::uint32_t>(action), value);
    }
    return table;
}

bool QTable::operator==(const QTable& other) const {
    if (action_count_ != other.action_count_) return false;
    if (rows_.size() != other.rows_.size()) return false;
    for (const auto& [state, row] : rows_) {
        const auto it = other.rows_.find(state);
        if (it == other.rows_.end() || it->second != row) return false;
    }
    return true;
}

}  // namespace trafficrl
