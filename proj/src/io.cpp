#include "trafficrl/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trafficrl {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

void expect_header(std::ifstream& in, const std::string& expected,
                   const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != expected)
        throw std::runtime_error(path + ": expected header '" + expected + "'");
}

std::string fmt(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

}  // namespace

void write_trace_csv(const std::string& path, const Scenario& scenario,
                     const RunTrace& trace) {
    auto out = open_out(path);
    out << "step,road,queue,action_i,reward,cost,overflow\n";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const TraceStep& ts = trace.steps[k];
        for (std::size_t r = 0; r < scenario.road_count(); ++r) {
            out << (k + 1) << ',' << scenario.roads[r].id << ','
                << fmt("%.6f", ts.state.queues[r]) << ','
                << ts.action[scenario.road_signal_pos[r]] << ','
                << fmt("%.6f", ts.reward) << ',' << fmt("%.6f", ts.cost) << ','
                << (ts.overflow[r] ? 1 : 0) << '\n';
        }
    }
}

RunTrace read_trace_csv(const std::string& path, const Scenario& scenario) {
    auto in = open_in(path);
    expect_header(in, "step,road,queue,action_i,reward,cost,overflow", path);

    RunTrace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7) throw std::runtime_error(path + ": bad row '" + line + "'");
        const std::size_t step_no = std::stoull(fields[0]);
        const int road = scenario.road_index(fields[1]);
        if (road < 0)
            throw std::runtime_error(path + ": unknown road '" + fields[1] + "'");
        if (step_no < 1 || step_no > trace.steps.size() + 1)
            throw std::runtime_error(path + ": step out of order in '" + line + "'");
        if (step_no == trace.steps.size() + 1) {
            TraceStep ts;
            ts.state.queues.assign(scenario.road_count(), 0.0);
            ts.action.assign(scenario.intersection_count(), 0);
            ts.overflow.assign(scenario.road_count(), false);
            trace.steps.push_back(std::move(ts));
        }
        TraceStep& ts = trace.steps[step_no - 1];
        ts.state.queues[road] = std::stod(fields[2]);
        ts.action[scenario.road_signal_pos[road]] = std::stoi(fields[3]);
        ts.reward = std::stod(fields[4]);
        ts.cost = std::stod(fields[5]);
        ts.overflow[road] = fields[6] == "1";
    }
    return trace;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    auto out = open_out(path);
    const std::size_t steps = result.rows.empty() ? 0 : result.rows[0].step_mean_cost.size();
    out << "pct";
    for (std::size_t k = 1; k <= steps; ++k) out << ",step" << k;
    out << ",overflow_frac,seeds\n";
    for (const SweepRow& row : result.rows) {
        out << fmt("%g", row.pct);
        for (double cost : row.step_mean_cost) out << ',' << fmt("%.2f", cost);
        out << ',' << fmt("%.4f", row.overflow_frac) << ',' << row.seeds << '\n';
    }
}

SweepResult read_sweep_csv(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("pct,", 0) != 0)
        throw std::runtime_error(path + ": bad sweep header");
    const std::size_t columns = split_csv(header).size();
    if (columns < 3) throw std::runtime_error(path + ": bad sweep header");
    const std::size_t steps = columns - 3;

    SweepResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != columns)
            throw std::runtime_error(path + ": bad row '" + line + "'");
        SweepRow row;
        row.pct = std::stod(fields[0]);
        for (std::size_t k = 0; k < steps; ++k)
            row.step_mean_cost.push_back(std::stod(fields[1 + k]));
        row.overflow_frac = std::stod(fields[1 + steps]);
        row.seeds = std::stoi(fields[2 + steps]);
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_generations_csv(const std::string& path, const GenerationLog& log) {
    auto out = open_out(path);
    out << "generation,intersection,lo,hi,spacing,best_value,greedy_cost\n";
    for (const GenerationRecord& rec : log)
        out << rec.generation << ',' << rec.intersection << ',' << rec.lo << ','
            << rec.hi << ',' << rec.spacing << ',' << rec.best_value << ','
            << fmt("%.6f", rec.greedy_cost) << '\n';
}

GenerationLog read_generations_csv(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, "generation,intersection,lo,hi,spacing,best_value,greedy_cost",
                  path);
    GenerationLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7) throw std::runtime_error(path + ": bad row '" + line + "'");
        GenerationRecord rec;
        rec.generation = std::stoi(fields[0]);
        rec.intersection = std::stoi(fields[1]);
        rec.lo = std::stoi(fields[2]);
        rec.hi = std::stoi(fields[3]);
        rec.spacing = std::stoi(fields[4]);
        rec.best_value = std::stoi(fields[5]);
        rec.greedy_cost = std::stod(fields[6]);
        log.push_back(rec);
    }
    return log;
}

void write_run_meta(const std::string& path, const RunConfig& config, std::uint64_t seed,
                    const nlohmann::json& extra) {
    nlohmann::json meta;
    meta["config"] = config.to_json();
    meta["seed"] = seed;
    if (!extra.is_null())
        for (const auto& [key, value] : extra.items()) meta[key] = value;
    auto out = open_out(path);
    out << meta.dump(2) << '\n';
}

}  // namespace trafficrl
