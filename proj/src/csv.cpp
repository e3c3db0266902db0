#include "rmab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace rmab {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail_cell(std::size_t row, const char* column, const std::string& value,
                            const char* reason) {
    std::ostringstream msg;
    msg << "row " << row << ", column '" << column << "': " << reason << " (got '" << value
        << "')";
    throw std::invalid_argument(msg.str());
}

std::int64_t parse_int(const std::string& field, std::size_t row, const char* column) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        fail_cell(row, column, field, "expected an integer");
    return value;
}

int parse_binary(const std::string& field, std::size_t row, const char* column) {
    const std::int64_t value = parse_int(field, row, column);
    if (value != 0 && value != 1) fail_cell(row, column, field, "expected 0 or 1");
    return static_cast<int>(value);
}

double parse_prob(const std::string& field, std::size_t row, const char* column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        fail_cell(row, column, field, "expected a decimal");
    if (!(value >= 0.0 && value <= 1.0)) fail_cell(row, column, field, "expected a value in [0,1]");
    return value;
}

// Reads a line tolerant of a trailing CR (files may come from anywhere).
bool get_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void require_header(std::istream& in, const char* expected) {
    std::string line;
    if (!get_line(in, line) || line != expected)
        throw std::invalid_argument(std::string("expected header '") + expected + "', got '" +
                                    line + "'");
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("failed to format double");
    return std::string(buffer, ptr);
}

void write_trajectory_csv(const StudyLog& log, std::ostream& out) {
    out << kTrajectoryHeader << '\n';
    for (const WeekRecord& week : log.weeks) {
        for (const Transition& t : week.transitions) {
            out << t.arm_id << ',' << week.week << ',' << t.state << ',' << t.action << ','
                << t.next_state << '\n';
        }
    }
}

std::vector<TrajectoryLog> read_trajectory_csv(std::istream& in) {
    require_header(in, kTrajectoryHeader);

    std::map<ArmId, TrajectoryLog> by_arm;
    std::string line;
    std::size_t row = 1; // header was row 1
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5)
            throw std::invalid_argument("row " + std::to_string(row) + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));

        const ArmId arm_id = parse_int(fields[0], row, "arm_id");
        const std::int64_t week = parse_int(fields[1], row, "week");
        if (week < 0) fail_cell(row, "week", fields[1], "expected a non-negative integer");

        TrajectoryStep step;
        step.week = static_cast<std::size_t>(week);
        step.state = parse_binary(fields[2], row, "state");
        step.action = parse_binary(fields[3], row, "action");
        step.next_state = parse_binary(fields[4], row, "next_state");

        auto& log = by_arm[arm_id];
        log.arm_id = arm_id;
        log.steps.push_back(step);
    }

    std::vector<TrajectoryLog> logs;
    logs.reserve(by_arm.size());
    for (auto& [arm_id, log] : by_arm) {
        std::sort(log.steps.begin(), log.steps.end(),
                  [](const TrajectoryStep& a, const TrajectoryStep& b) { return a.week < b.week; });
        for (std::size_t i = 0; i + 1 < log.steps.size(); ++i) {
            if (log.steps[i].week == log.steps[i + 1].week)
                throw std::invalid_argument("arm " + std::to_string(arm_id) +
                                            " has duplicate rows for week " +
                                            std::to_string(log.steps[i].week));
            // Contiguous weeks must chain: this week's landing state is the
            // next week's starting state.
            if (log.steps[i].week + 1 == log.steps[i + 1].week &&
                log.steps[i].next_state != log.steps[i + 1].state)
                throw std::invalid_argument(
                    "arm " + std::to_string(arm_id) + ": next_state of week " +
                    std::to_string(log.steps[i].week) + " does not chain into week " +
                    std::to_string(log.steps[i + 1].week));
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

void write_model_csv(const std::vector<std::pair<ArmId, TransitionModel>>& models,
                     std::ostream& out) {
    out << kModelHeader << '\n';
    for (const auto& [arm_id, model] : models) {
        out << arm_id << ',' << format_double(model.prob(0, 0)) << ','
            << format_double(model.prob(1, 0)) << ',' << format_double(model.prob(0, 1)) << ','
            << format_double(model.prob(1, 1)) << '\n';
    }
}

std::vector<std::pair<ArmId, TransitionModel>> read_model_csv(std::istream& in) {
    require_header(in, kModelHeader);

    std::vector<std::pair<ArmId, TransitionModel>> models;
    std::string line;
    std::size_t row = 1;
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5)
            throw std::invalid_argument("row " + std::to_string(row) + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
        const ArmId arm_id = parse_int(fields[0], row, "arm_id");
        const double p00 = parse_prob(fields[1], row, "p00");
        const double p10 = parse_prob(fields[2], row, "p10");
        const double p01 = parse_prob(fields[3], row, "p01");
        const double p11 = parse_prob(fields[4], row, "p11");
        models.emplace_back(arm_id, TransitionModel(p00, p10, p01, p11));
    }
    return models;
}

void write_observed_model_csv(const std::vector<ImputedModel>& models, std::ostream& out) {
    out << kObservedModelHeader << '\n';
    for (const ImputedModel& m : models) {
        out << m.arm_id << ',' << format_double(m.model.prob(0, 0)) << ','
            << format_double(m.model.prob(1, 0)) << ',' << format_double(m.model.prob(0, 1)) << ','
            << format_double(m.model.prob(1, 1)) << ',' << int(m.imputed[0][0]) << ','
            << int(m.imputed[1][0]) << ',' << int(m.imputed[0][1]) << ',' << int(m.imputed[1][1])
            << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace rmab
