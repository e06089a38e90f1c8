#pragma once

#include <string>
#include <vector>

#include "mstates/correlation.hpp"
#include "mstates/epochs.hpp"
#include "mstates/reduced_rank.hpp"

namespace mstates {

/// Build the epoch matrix of the requested kind from one normalized window.
inline CorrelationMatrix build_epoch_matrix(const NormalizedEpoch& n, MatrixKind kind) {
    switch (kind) {
        case MatrixKind::standard: return pearson(n);
        case MatrixKind::demeaned: return demean_matrix(pearson(n));
        case MatrixKind::reduced_rank_cov: return reduce_cov(n).correlation;
        case MatrixKind::reduced_rank_corr: return reduce_corr(n).correlation;
    }
    throw config_error("unknown matrix kind");
}

struct EpochMatrixSet {
    std::vector<CorrelationMatrix> matrices;  // indexed by n_ep - 1
    std::vector<EpochWindow> windows;         // matching epoch metadata (raw slices included)
    int dropped_days = 0;
    std::vector<std::string> warnings;        // degenerate market dyads etc.
};

/// Disjoint-epoch matrices of one kind over the whole return history.
inline EpochMatrixSet epoch_matrices(const ReturnMatrix& r, int epoch_length, MatrixKind kind) {
    EpochSlicing slicing = slice_epochs(r, epoch_length);
    EpochMatrixSet out;
    out.dropped_days = slicing.dropped_days;
    out.windows = std::move(slicing.windows);
    out.matrices.reserve(out.windows.size());
    for (const EpochWindow& w : out.windows) {
        NormalizedEpoch n = normalize(w);
        if (kind == MatrixKind::reduced_rank_cov || kind == MatrixKind::reduced_rank_corr) {
            ReducedRankPair pair = kind == MatrixKind::reduced_rank_cov ? reduce_cov(n) : reduce_corr(n);
            if (pair.degenerate_market)
                out.warnings.push_back("epoch " + std::to_string(w.index) +
                                       ": top singular values tied; market dyad ill-defined");
            out.matrices.push_back(std::move(pair.correlation));
        } else {
            out.matrices.push_back(build_epoch_matrix(n, kind));
        }
    }
    return out;
}

/// Mean correlation per window: one point per 1-day offset.
struct MeanCorrelationSeries {
    std::vector<std::string> mid_dates;
    std::vector<double> values;
};

/// Mean correlation over all windows of length T starting at offsets
/// 1..T_tot-T+1. Offsets 1, T+1, 2T+1, ... reproduce the disjoint-epoch
/// values exactly (identical code path on identical slices).
inline MeanCorrelationSeries sliding_mean_correlation(const ReturnMatrix& r, int epoch_length,
                                                      MatrixKind kind = MatrixKind::standard) {
    const int t_tot = static_cast<int>(r.days());
    if (epoch_length < 3)
        throw domain_error("epoch length must be at least 3, got " + std::to_string(epoch_length));
    if (epoch_length > t_tot)
        throw domain_error("epoch length " + std::to_string(epoch_length) +
                           " exceeds available trading days " + std::to_string(t_tot));

    MeanCorrelationSeries out;
    const int n_windows = t_tot - epoch_length + 1;
    out.mid_dates.reserve(static_cast<std::size_t>(n_windows));
    out.values.reserve(static_cast<std::size_t>(n_windows));
    for (int s = 0; s < n_windows; ++s) {
        EpochWindow w;
        w.index = s + 1;  // window offset, names the window in error messages
        w.length = epoch_length;
        w.raw = r.values.middleCols(s, epoch_length);
        const int mid = s + (epoch_length + 1) / 2 - 1;
        w.start_date = r.dates[static_cast<std::size_t>(s)];
        w.mid_date = r.dates[static_cast<std::size_t>(mid)];
        w.end_date = r.dates[static_cast<std::size_t>(s + epoch_length - 1)];
        try {
            out.values.push_back(mean_correlation(build_epoch_matrix(normalize(w), kind)));
        } catch (const domain_error& e) {
            throw domain_error(std::string(e.what()) + " [sliding window at offset " +
                               std::to_string(s + 1) + ", " + w.start_date + ".." + w.end_date + "]");
        }
        out.mid_dates.push_back(w.mid_date);
    }
    return out;
}

}  // namespace mstates
