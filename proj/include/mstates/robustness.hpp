#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mstates/clustering.hpp"
#include "mstates/epoch_matrices.hpp"
#include "mstates/errors.hpp"
#include "mstates/pca.hpp"
#include "mstates/rand_index.hpp"

namespace mstates {

struct RobustnessParams {
    MatrixKind kind = MatrixKind::standard;
    int epoch_length = 42;
    std::vector<int> subset_sizes;   // K' values
    int repetitions = 50;            // n_rep per K'
    int reference_k = 4;             // cluster count of the reference solution
    int restarts = 100;
    std::uint64_t clustering_seed = 0;  // same seed as the reference clustering run
    std::uint64_t sampling_seed = 0;    // drives the ticker subsets
};

struct AriSample {
    int subset_size = 0;
    int repetition = 0;       // 1-based
    std::uint64_t seed = 0;   // sampling sub-seed of this repetition
    double ari = 0.0;
};

struct AriSummary {
    int subset_size = 0;
    double mean = 0.0;
    double min = 0.0;   // error-bar range is the min/max of the repetitions
    double max = 0.0;
    double stddev = 0.0;
};

struct AriReport {
    std::vector<AriSample> samples;
    std::vector<AriSummary> summary;
    std::vector<std::string> log;  // resampled subsets etc.
};

namespace detail {

inline ReturnMatrix take_rows(const ReturnMatrix& r, const std::vector<int>& rows) {
    ReturnMatrix out;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), r.values.cols());
    out.row_order.reserve(rows.size());
    out.permutation.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.values.row(static_cast<Eigen::Index>(i)) = r.values.row(rows[i]);
        out.row_order.push_back(r.row_order[static_cast<std::size_t>(rows[i])]);
        out.permutation.push_back(r.permutation[static_cast<std::size_t>(rows[i])]);
    }
    out.dates = r.dates;
    return out;
}

/// Ascending subset of `size` distinct row indices; sorting keeps the
/// sector ordering of the rows intact.
inline std::vector<int> sample_subset(int universe, int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(universe));
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < size; ++j) {
        std::uniform_int_distribution<int> pick(j, universe - 1);
        std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(size));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace detail

/// How strongly the market-state partition depends on the chosen stock
/// universe: repeatedly recluster random ticker subsets at the reference k
/// and compare against the full-universe solution with the adjusted Rand
/// index. A subset that produces a dead row in some epoch is resampled
/// with an incremented sub-seed and logged.
inline AriReport subset_robustness(const ReturnMatrix& returns, const RobustnessParams& params,
                                   const std::vector<int>& reference_assignments) {
    const int universe = static_cast<int>(returns.assets());
    for (int size : params.subset_sizes) {
        if (size < 2 || size > universe)
            throw domain_error("subset size " + std::to_string(size) + " outside [2, " +
                               std::to_string(universe) + "]");
    }
    if (params.repetitions < 1) throw domain_error("repetitions must be at least 1");

    AriReport report;
    for (int size : params.subset_sizes) {
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(params.repetitions));
        for (int rep = 1; rep <= params.repetitions; ++rep) {
            const std::uint64_t rep_seed =
                mix_seed(mix_seed(params.sampling_seed, static_cast<std::uint64_t>(size)),
                         static_cast<std::uint64_t>(rep));
            std::uint64_t attempt_seed = rep_seed;
            for (int attempt = 0;; ++attempt) {
                if (attempt >= 64)
                    throw numerical_error("subset resampling did not find a usable subset (K'=" +
                                          std::to_string(size) + ", rep " + std::to_string(rep) + ")");
                try {
                    ReturnMatrix sub = detail::take_rows(
                        returns, detail::sample_subset(universe, size, attempt_seed));
                    EpochMatrixSet epochs = epoch_matrices(sub, params.epoch_length, params.kind);
                    MatrixSet set(std::move(epochs.matrices));
                    auto hierarchy = bisecting_kmeans(pca_project(set), params.reference_k,
                                                      params.restarts, params.clustering_seed);
                    const double ari =
                        adjusted_rand_index(hierarchy.back().assignments, reference_assignments);
                    report.samples.push_back({size, rep, attempt_seed, ari});
                    values.push_back(ari);
                    break;
                } catch (const domain_error& e) {
                    report.log.push_back("K'=" + std::to_string(size) + " rep " +
                                         std::to_string(rep) + ": resampled (" + e.what() + ")");
                    attempt_seed = mix_seed(rep_seed, static_cast<std::uint64_t>(attempt + 1));
                }
            }
        }
        AriSummary s;
        s.subset_size = size;
        s.min = *std::min_element(values.begin(), values.end());
        s.max = *std::max_element(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(var / static_cast<double>(values.size()));
        report.summary.push_back(s);
    }
    return report;
}

}  // namespace mstates
