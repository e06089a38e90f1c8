#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "mstates/clustering.hpp"
#include "mstates/errors.hpp"

namespace mstates {

namespace detail {

inline double pairs2(double m) { return m * (m - 1.0) / 2.0; }

/// Canonical form: labels renumbered by first occurrence, so two vectors
/// describe the same partition iff their canonical forms are equal.
inline std::vector<int> canonical_partition(const std::vector<int>& labels) {
    std::map<int, int> map;
    std::vector<int> out(labels.size());
    int next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = map.emplace(labels[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    return out;
}

struct PairCounts {
    double same_same = 0;  // a: same cluster in both partitions
    double diff_diff = 0;  // b: different clusters in both
    double total = 0;      // all unordered pairs
};

inline PairCounts count_pairs(const std::vector<int>& z1, const std::vector<int>& z2) {
    if (z1.size() != z2.size()) throw domain_error("partitions cover different epoch sets");
    PairCounts c;
    const std::size_t n = z1.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same1 = z1[i] == z1[j];
            const bool same2 = z2[i] == z2[j];
            c.same_same += same1 && same2;
            c.diff_diff += !same1 && !same2;
            c.total += 1;
        }
    return c;
}

}  // namespace detail

/// Rand index R = (a + b) / C(n, 2): the fraction of unordered pairs on
/// which the two partitions agree.
inline double rand_index(const std::vector<int>& z1, const std::vector<int>& z2) {
    detail::PairCounts c = detail::count_pairs(z1, z2);
    if (c.total == 0) throw domain_error("Rand index needs at least 2 items");
    return (c.same_same + c.diff_diff) / c.total;
}

inline double rand_index(const ClusterSolution& z1, const ClusterSolution& z2) {
    return rand_index(z1.assignments, z2.assignments);
}

/// Adjusted Rand index (R - PM) / (1 - PM), with the permutation-model
/// expectation PM evaluated through the hypergeometric pair-counting
/// closed form over the contingency table. The degenerate case 1 - PM = 0
/// (both partitions trivial) is defined as 1 for identical partitions and
/// 0 otherwise; `degenerate` is set when provided.
inline double adjusted_rand_index(const std::vector<int>& z1, const std::vector<int>& z2,
                                  bool* degenerate = nullptr) {
    if (z1.size() != z2.size()) throw domain_error("partitions cover different epoch sets");
    if (degenerate) *degenerate = false;

    std::map<std::pair<int, int>, double> contingency;
    std::map<int, double> row_sums, col_sums;
    for (std::size_t i = 0; i < z1.size(); ++i) {
        contingency[{z1[i], z2[i]}] += 1.0;
        row_sums[z1[i]] += 1.0;
        col_sums[z2[i]] += 1.0;
    }

    double index = 0.0, rows = 0.0, cols = 0.0;
    for (const auto& [cell, count] : contingency) index += detail::pairs2(count);
    for (const auto& [label, count] : row_sums) rows += detail::pairs2(count);
    for (const auto& [label, count] : col_sums) cols += detail::pairs2(count);

    const double total = detail::pairs2(static_cast<double>(z1.size()));
    const double expected = total > 0.0 ? rows * cols / total : 0.0;
    const double max_index = (rows + cols) / 2.0;
    const double denom = max_index - expected;
    if (denom == 0.0) {
        if (degenerate) *degenerate = true;
        return detail::canonical_partition(z1) == detail::canonical_partition(z2) ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

inline double adjusted_rand_index(const ClusterSolution& z1, const ClusterSolution& z2,
                                  bool* degenerate = nullptr) {
    return adjusted_rand_index(z1.assignments, z2.assignments, degenerate);
}

}  // namespace mstates
