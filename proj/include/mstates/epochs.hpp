#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mstates/errors.hpp"
#include "mstates/ingest.hpp"

namespace mstates {

/// One disjoint window of T consecutive trading days of the return matrix.
struct EpochWindow {
    int index = 0;             // 1-based epoch number n_ep
    int length = 0;            // T trading days
    Eigen::MatrixXd raw;       // K x T slice of the return matrix
    std::string start_date;
    std::string mid_date;      // date at the center of the epoch
    std::string end_date;
};

/// Result of epoch slicing; trailing days that do not fill a window are dropped.
struct EpochSlicing {
    std::vector<EpochWindow> windows;
    int dropped_days = 0;
};

/// Cut the return series into N_ep = floor(T_tot / T) disjoint epochs.
inline EpochSlicing slice_epochs(const ReturnMatrix& r, int epoch_length) {
    const int t_tot = static_cast<int>(r.days());
    if (epoch_length < 3)
        throw domain_error("epoch length must be at least 3, got " + std::to_string(epoch_length));
    if (epoch_length > t_tot)
        throw domain_error("epoch length " + std::to_string(epoch_length) +
                           " exceeds available trading days " + std::to_string(t_tot));

    const int n_ep = t_tot / epoch_length;
    EpochSlicing out;
    out.dropped_days = t_tot - n_ep * epoch_length;
    out.windows.reserve(static_cast<std::size_t>(n_ep));
    for (int n = 1; n <= n_ep; ++n) {
        EpochWindow w;
        w.index = n;
        w.length = epoch_length;
        const int start = (n - 1) * epoch_length;           // 0-based first column
        const int mid = start + (epoch_length + 1) / 2 - 1; // column (n-1)T + ceil(T/2), 0-based
        w.raw = r.values.middleCols(start, epoch_length);
        w.start_date = r.dates[static_cast<std::size_t>(start)];
        w.mid_date = r.dates[static_cast<std::size_t>(mid)];
        w.end_date = r.dates[static_cast<std::size_t>(start + epoch_length - 1)];
        out.windows.push_back(std::move(w));
    }
    return out;
}

}  // namespace mstates
