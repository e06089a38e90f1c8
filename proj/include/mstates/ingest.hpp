#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mstates/csv.hpp"
#include "mstates/errors.hpp"

namespace mstates {

/// The 11 GICS sectors in the fixed row order used for all matrices and heatmaps.
inline const std::array<std::pair<const char*, const char*>, 11>& gics_sectors() {
    static const std::array<std::pair<const char*, const char*>, 11> sectors = {{
        {"E", "Energy"},
        {"M", "Materials"},
        {"I", "Industrials"},
        {"CD", "Consumer Discretionary"},
        {"CST", "Consumer Staples"},
        {"HC", "Health Care"},
        {"F", "Financials"},
        {"RE", "Real Estate"},
        {"IT", "Information Technology"},
        {"CSE", "Communication Services"},
        {"U", "Utilities"},
    }};
    return sectors;
}

/// Rank of a sector abbreviation in the fixed order, or nullopt for unknown codes.
inline std::optional<int> sector_rank(const std::string& code) {
    const auto& sectors = gics_sectors();
    for (std::size_t i = 0; i < sectors.size(); ++i)
        if (code == sectors[i].first) return static_cast<int>(i);
    return std::nullopt;
}

/// Column mapping for a delimited price file (one row per ticker and date).
struct PriceSchema {
    char delimiter = ',';
    std::string ticker_column = "ticker";
    std::string date_column = "date";
    std::string price_column = "close";
};

/// Adjusted daily closing prices on a complete trading-day calendar.
///
/// Tickers without a price on every calendar date are dropped at load time
/// and listed in `dropped`; interpolating gaps would silently distort the
/// correlations downstream.
struct PriceTable {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;   // strictly increasing, ISO format
    Eigen::MatrixXd prices;           // K x (T_tot + 1), strictly positive
    std::vector<std::string> dropped; // "TICKER: reason" lines for the drop report

    Eigen::Index size() const { return prices.rows(); }
};

/// Per-row metadata of the return matrix.
struct RowInfo {
    std::string ticker;
    std::string sector;     // GICS abbreviation, empty until sector_sort
    std::string subsector;  // optional, used for intra-sector ordering
};

/// K x T_tot matrix of daily log returns; rows carry ticker/sector metadata.
struct ReturnMatrix {
    Eigen::MatrixXd values;            // K x T_tot
    std::vector<RowInfo> row_order;
    std::vector<std::string> dates;    // per column: date the return realizes on
    std::vector<int> permutation;      // output row -> input row (identity before sorting)

    Eigen::Index assets() const { return values.rows(); }
    Eigen::Index days() const { return values.cols(); }
};

/// Ticker -> (sector, subsector) mapping loaded from a two/three column file.
struct SectorMap {
    std::unordered_map<std::string, std::pair<std::string, std::string>> entries;
};

inline SectorMap load_sector_map(const std::string& path, char delimiter = ',') {
    csv::Table table = csv::read_file(path, delimiter);
    std::size_t c_ticker = table.required_column("ticker");
    std::size_t c_sector = table.required_column("sector");
    std::optional<std::size_t> c_sub = table.column("subsector");

    SectorMap map;
    for (const auto& row : table.rows) {
        const std::string& ticker = row.fields[c_ticker];
        std::string sub = c_sub ? row.fields[*c_sub] : "";
        auto [it, inserted] = map.entries.emplace(ticker, std::make_pair(row.fields[c_sector], sub));
        if (!inserted) throw parse_error("duplicate sector entry for ticker " + ticker, row.line);
    }
    return map;
}

/// Load a delimited price file and assemble the complete-panel price table.
///
/// The trading calendar is the union of all dates seen in the file; tickers
/// lacking a price on any calendar date are dropped and reported. Throws
/// domain_error when no ticker covers the full calendar.
inline PriceTable load_prices(const std::string& path, const PriceSchema& schema = {}) {
    csv::Table table = csv::read_file(path, schema.delimiter);
    std::size_t c_ticker = table.required_column(schema.ticker_column);
    std::size_t c_date = table.required_column(schema.date_column);
    std::size_t c_price = table.required_column(schema.price_column);

    // ticker -> date -> price, with dates collected into the union calendar
    std::map<std::string, std::map<std::string, double>> by_ticker;
    std::map<std::string, std::size_t> first_line;
    std::vector<std::string> calendar;
    for (const auto& row : table.rows) {
        const std::string& ticker = row.fields[c_ticker];
        const std::string& date = row.fields[c_date];
        if (ticker.empty()) throw parse_error("empty ticker", row.line);
        if (!csv::looks_like_iso_date(date))
            throw parse_error("date '" + date + "' is not YYYY-MM-DD", row.line);
        double price = csv::parse_double(row.fields[c_price], row.line);
        if (!(price > 0.0) || !std::isfinite(price))
            throw domain_error("non-positive price " + row.fields[c_price] + " for " + ticker +
                               " on " + date + " (line " + std::to_string(row.line) + ")");
        auto& series = by_ticker[ticker];
        if (!series.emplace(date, price).second)
            throw parse_error("duplicate price for " + ticker + " on " + date, row.line);
        first_line.emplace(ticker, row.line);
        calendar.push_back(date);
    }
    if (by_ticker.empty()) throw domain_error("price file contains no data rows: " + path);

    std::sort(calendar.begin(), calendar.end());
    calendar.erase(std::unique(calendar.begin(), calendar.end()), calendar.end());
    if (calendar.size() < 2)
        throw domain_error("need at least 2 trading dates to form returns, got " +
                           std::to_string(calendar.size()));

    PriceTable out;
    out.dates = calendar;
    std::vector<const std::map<std::string, double>*> kept;
    for (const auto& [ticker, series] : by_ticker) {
        if (series.size() == calendar.size()) {
            out.tickers.push_back(ticker);
            kept.push_back(&series);
        } else {
            out.dropped.push_back(ticker + ": covers " + std::to_string(series.size()) + "/" +
                                  std::to_string(calendar.size()) + " trading dates");
        }
    }
    if (out.tickers.empty())
        throw domain_error("no ticker covers the common date range (empty intersection)");

    out.prices.resize(static_cast<Eigen::Index>(out.tickers.size()),
                      static_cast<Eigen::Index>(calendar.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        Eigen::Index j = 0;
        for (const auto& date : calendar) out.prices(static_cast<Eigen::Index>(i), j++) = kept[i]->at(date);
    }
    return out;
}

/// Daily log returns G_i(t) = ln(S_i(t+1) / S_i(t)); column t is stamped with
/// the date the return realizes on.
inline ReturnMatrix log_returns(const PriceTable& prices) {
    const Eigen::Index k = prices.prices.rows();
    const Eigen::Index t_tot = prices.prices.cols() - 1;
    if (t_tot < 1) throw domain_error("need at least 2 dates to compute returns");

    ReturnMatrix out;
    out.values.resize(k, t_tot);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index t = 0; t < t_tot; ++t)
            out.values(i, t) = std::log(prices.prices(i, t + 1) / prices.prices(i, t));

    out.row_order.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out.row_order[static_cast<std::size_t>(i)].ticker = prices.tickers[static_cast<std::size_t>(i)];
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.permutation.resize(static_cast<std::size_t>(k));
    std::iota(out.permutation.begin(), out.permutation.end(), 0);
    return out;
}

/// Permute rows into the fixed 11-sector order; sub-sectors alphabetical
/// within a sector, tickers alphabetical within a sub-sector.
inline ReturnMatrix sector_sort(const ReturnMatrix& r, const SectorMap& map) {
    const std::size_t k = r.row_order.size();
    struct Key {
        int rank;
        std::string subsector;
        std::string ticker;
        std::size_t row;
    };
    std::vector<Key> keys;
    keys.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::string& ticker = r.row_order[i].ticker;
        auto it = map.entries.find(ticker);
        if (it == map.entries.end())
            throw domain_error("no sector assignment for ticker " + ticker);
        auto rank = sector_rank(it->second.first);
        if (!rank)
            throw domain_error("unknown sector code '" + it->second.first + "' for ticker " + ticker);
        keys.push_back({*rank, it->second.second, ticker, i});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::tie(a.rank, a.subsector, a.ticker) < std::tie(b.rank, b.subsector, b.ticker);
    });

    ReturnMatrix out;
    out.values.resize(r.values.rows(), r.values.cols());
    out.row_order.resize(k);
    out.dates = r.dates;
    out.permutation.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Key& key = keys[i];
        out.values.row(static_cast<Eigen::Index>(i)) = r.values.row(static_cast<Eigen::Index>(key.row));
        const auto& meta = map.entries.at(key.ticker);
        out.row_order[i] = {key.ticker, meta.first, meta.second};
        out.permutation[i] = r.permutation[key.row];
    }
    return out;
}

}  // namespace mstates
