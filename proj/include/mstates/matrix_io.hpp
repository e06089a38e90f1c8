#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mstates/correlation.hpp"
#include "mstates/csv.hpp"
#include "mstates/errors.hpp"

namespace mstates {

/// Round-trip-safe decimal formatting for all numerical text outputs.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Delimited text container: '#' metadata lines, then one matrix row per line.
// ---------------------------------------------------------------------------

inline void write_matrix_text(const std::string& path, const CorrelationMatrix& m,
                              char delimiter = ',') {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    out << "# kind=" << kind_name(m.kind) << " K=" << m.values.rows() << " epoch=" << m.epoch
        << " mid_date=" << m.mid_date << "\n";
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
            if (j) out << delimiter;
            out << format_double(m.values(i, j));
        }
        out << "\n";
    }
}

inline CorrelationMatrix read_matrix_text(const std::string& path, char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);

    CorrelationMatrix m;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = csv::strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string token;
            while (meta >> token) {
                auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                if (key == "kind") m.kind = kind_from_name(value);
                else if (key == "epoch") m.epoch = std::stoi(value);
                else if (key == "mid_date") m.mid_date = value;
            }
            continue;
        }
        std::vector<double> row;
        for (const std::string& f : csv::split_line(line, delimiter))
            row.push_back(csv::parse_double(f, lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("matrix file has no data rows: " + path);
    const std::size_t k = rows.size();
    for (const auto& row : rows)
        if (row.size() != k) throw data_error("matrix file is not square: " + path);
    m.values.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

// ---------------------------------------------------------------------------
// Compact binary container: fixed little-endian header, row-major doubles.
// ---------------------------------------------------------------------------

namespace detail {
struct MatrixHeader {
    char magic[4];        // "MSMX"
    std::uint32_t version;
    char kind[16];        // zero-padded kind name
    std::uint32_t k;
    std::uint32_t epoch;
    char mid_date[12];    // zero-padded YYYY-MM-DD
};
static_assert(sizeof(MatrixHeader) == 44);
}  // namespace detail

inline void write_matrix_binary(const std::string& path, const CorrelationMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path);

    detail::MatrixHeader h{};
    std::memcpy(h.magic, "MSMX", 4);
    h.version = 1;
    std::snprintf(h.kind, sizeof h.kind, "%s", kind_name(m.kind));
    h.k = static_cast<std::uint32_t>(m.values.rows());
    h.epoch = static_cast<std::uint32_t>(m.epoch);
    std::snprintf(h.mid_date, sizeof h.mid_date, "%s", m.mid_date.c_str());
    out.write(reinterpret_cast<const char*>(&h), sizeof h);

    for (Eigen::Index i = 0; i < m.values.rows(); ++i)
        for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
            const double v = m.values(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    if (!out) throw data_error("write failed: " + path);
}

inline CorrelationMatrix read_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);

    detail::MatrixHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    if (!in || std::memcmp(h.magic, "MSMX", 4) != 0)
        throw data_error("not a matrix container: " + path);
    if (h.version != 1)
        throw data_error("unsupported matrix container version " + std::to_string(h.version));

    CorrelationMatrix m;
    m.kind = kind_from_name(std::string(h.kind, strnlen(h.kind, sizeof h.kind)));
    m.epoch = static_cast<int>(h.epoch);
    m.mid_date = std::string(h.mid_date, strnlen(h.mid_date, sizeof h.mid_date));
    const Eigen::Index k = static_cast<Eigen::Index>(h.k);
    m.values.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof v);
            m.values(i, j) = v;
        }
    if (!in) throw data_error("truncated matrix container: " + path);
    return m;
}

/// Read a matrix container by extension: .mmx binary, anything else text.
inline CorrelationMatrix read_matrix_any(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".mmx") == 0)
        return read_matrix_binary(path);
    return read_matrix_text(path);
}

}  // namespace mstates
