#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mstates/errors.hpp"

namespace mstates::csv {

/// One parsed data row together with its 1-based line number in the file.
struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// A delimited text file: header row (required) plus data rows.
struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    /// Index of a header column, or nullopt if absent.
    std::optional<std::size_t> column(const std::string& name) const {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    }

    /// Index of a required header column; throws parse_error if absent.
    std::size_t required_column(const std::string& name) const {
        auto idx = column(name);
        if (!idx) throw parse_error("missing required column '" + name + "' in header", 1);
        return *idx;
    }
};

inline std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

/// Read a delimited file. Blank lines and lines starting with '#' are skipped.
inline Table read_file(const std::string& path, char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);

    Table table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            table.header = split_line(line, delimiter);
            have_header = true;
            continue;
        }
        Row row;
        row.line = lineno;
        row.fields = split_line(line, delimiter);
        if (row.fields.size() != table.header.size())
            throw parse_error("expected " + std::to_string(table.header.size()) +
                                  " fields, got " + std::to_string(row.fields.size()),
                              lineno);
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw parse_error("file has no header row: " + path, 1);
    return table;
}

inline double parse_double(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error("cannot parse number '" + s + "'", line);
    }
}

/// Loose ISO date check (YYYY-MM-DD); lexicographic order equals calendar order.
inline bool looks_like_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

}  // namespace mstates::csv
