#pragma once

#include "wald/errors.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace wald::csv {

inline constexpr int kSchemaVersion = 1;

/// Locale-independent decimal formatting, 17 significant digits (round-trip exact).
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return {buf, ptr};
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError(fmt::format("not a number: '{}'", std::string(s)));
    return x;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ValidationError(fmt::format("missing CSV column '{}'", std::string(name)));
    }
};

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

/// Reads a CSV as written by write(): optional '#' comment lines, then a
/// header row, then data rows of matching width.
inline Table read(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (t.header.empty()) {
            t.header = split_line(line);
            continue;
        }
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw ValidationError(fmt::format("CSV row has {} fields, header has {}",
                                              fields.size(), t.header.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty()) throw ValidationError("CSV input has no header row");
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open '{}'", path));
    return read(in);
}

inline void write(std::ostream& out, const Table& t) {
    out << "# schema_version=" << kSchemaVersion << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << t.header[i] << (i + 1 < t.header.size() ? "," : "\n");
    for (const auto& row : t.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

} // namespace wald::csv
