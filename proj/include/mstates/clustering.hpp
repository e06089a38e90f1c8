#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mstates/correlation.hpp"
#include "mstates/errors.hpp"

namespace mstates {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed derivation; avoids correlated RNG streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

/// Euclidean (Frobenius) distance over all K^2 entries, both triangles and diagonal.
inline double distance(const CorrelationMatrix& a, const CorrelationMatrix& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        throw domain_error("matrix dimension mismatch in distance");
    return (a.values - b.values).norm();
}

/// The set Z of epoch matrices to cluster; all items share kind and dimension.
struct MatrixSet {
    std::vector<CorrelationMatrix> items;

    MatrixSet() = default;
    explicit MatrixSet(std::vector<CorrelationMatrix> matrices) : items(std::move(matrices)) {
        for (const auto& m : items) {
            if (m.kind != items.front().kind)
                throw domain_error("matrix set mixes kinds");
            if (m.values.rows() != items.front().values.rows())
                throw domain_error("matrix set mixes dimensions");
        }
    }

    int size() const { return static_cast<int>(items.size()); }
    Eigen::Index dim() const { return items.empty() ? 0 : items.front().values.rows(); }
    Eigen::Index flattened_dim() const { return dim() * dim(); }
    MatrixKind kind() const { return items.empty() ? MatrixKind::standard : items.front().kind; }

    /// One row per epoch, each matrix flattened to a K^2 vector.
    Eigen::MatrixXd flatten() const {
        Eigen::MatrixXd f(size(), flattened_dim());
        for (int n = 0; n < size(); ++n)
            f.row(n) = Eigen::Map<const Eigen::VectorXd>(items[static_cast<std::size_t>(n)].values.data(),
                                                         flattened_dim());
        return f;
    }
};

/// One converged k-means run in point space (0-based labels).
struct KMeansRun {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;  // k x D
    double objective = 0.0;     // J: sum of squared distances to assigned centroids
    int iterations = 0;
    long long monotonicity_violations = 0;  // J increases across Lloyd iterations (should be 0)
};

namespace detail {

constexpr int kMaxLloydIterations = 10000;

inline double objective_of(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& centroids,
                           const std::vector<int>& labels) {
    double j = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        j += (pts.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    return j;
}

/// k distinct member indices, drawn without replacement.
inline std::vector<int> sample_members(Eigen::Index n, int k, std::mt19937_64& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j) {
        std::uniform_int_distribution<Eigen::Index> pick(j, n - 1);
        std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

inline KMeansRun lloyd_once(const Eigen::MatrixXd& pts, int k, std::uint64_t restart_seed) {
    const Eigen::Index n = pts.rows();
    std::mt19937_64 rng(restart_seed);

    KMeansRun run;
    run.centroids.resize(k, pts.cols());
    for (int j = 0; const int member : sample_members(n, k, rng))
        run.centroids.row(j++) = pts.row(member);

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    double prev_objective = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= kMaxLloydIterations; ++iter) {
        // Assign each point to its nearest centroid; ties keep the lowest label.
        std::vector<int> next(static_cast<std::size_t>(n));
        std::fill(counts.begin(), counts.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (pts.row(i) - run.centroids.row(0)).squaredNorm();
            for (int l = 1; l < k; ++l) {
                const double d = (pts.row(i) - run.centroids.row(l)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = l;
                }
            }
            next[static_cast<std::size_t>(i)] = best;
            ++counts[static_cast<std::size_t>(best)];
        }

        // Repair empty clusters: move the member farthest from its assigned
        // centroid (from a cluster that keeps at least one member).
        for (int l = 0; l < k; ++l) {
            if (counts[static_cast<std::size_t>(l)] > 0) continue;
            Eigen::Index farthest = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int owner = next[static_cast<std::size_t>(i)];
                if (counts[static_cast<std::size_t>(owner)] < 2) continue;
                const double d = (pts.row(i) - run.centroids.row(owner)).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    farthest = i;
                }
            }
            if (farthest < 0) throw numerical_error("cannot repair empty cluster");
            --counts[static_cast<std::size_t>(next[static_cast<std::size_t>(farthest)])];
            next[static_cast<std::size_t>(farthest)] = l;
            counts[static_cast<std::size_t>(l)] = 1;
        }

        // Update centroids to member means.
        run.centroids.setZero();
        for (Eigen::Index i = 0; i < n; ++i)
            run.centroids.row(next[static_cast<std::size_t>(i)]) += pts.row(i);
        for (int l = 0; l < k; ++l)
            run.centroids.row(l) /= static_cast<double>(counts[static_cast<std::size_t>(l)]);

        const double objective = objective_of(pts, run.centroids, next);
        if (objective > prev_objective * (1.0 + 1e-12)) ++run.monotonicity_violations;
        prev_objective = objective;
        run.iterations = iter;

        const bool converged = (next == labels);
        labels = std::move(next);
        if (converged) break;
    }
    run.labels = std::move(labels);
    run.objective = prev_objective;
    return run;
}

}  // namespace detail

/// Lloyd k-means from k distinct random members, best objective over
/// `restarts` independent seeded restarts (ties keep the earliest restart).
inline KMeansRun kmeans_points(const Eigen::MatrixXd& pts, int k, int restarts, std::uint64_t seed) {
    if (k < 1) throw domain_error("cluster count must be at least 1");
    if (k > pts.rows())
        throw domain_error("cluster count " + std::to_string(k) + " exceeds set size " +
                           std::to_string(pts.rows()));
    if (restarts < 1) throw domain_error("restarts must be at least 1");

    KMeansRun best;
    long long violations = 0;
    for (int r = 0; r < restarts; ++r) {
        KMeansRun run = detail::lloyd_once(pts, k, mix_seed(seed, static_cast<std::uint64_t>(r)));
        violations += run.monotonicity_violations;
        if (r == 0 || run.objective < best.objective) best = std::move(run);
    }
    best.monotonicity_violations = violations;
    return best;
}

/// Hierarchy edge: the split that created a pair of sibling clusters.
struct SplitEdge {
    int parent_label = 0;       // label of the cluster that was split
    int left_label = 0;         // child keeping the parent label
    int right_label = 0;        // newly created label (equals k after the split)
    double centroid_distance = 0.0;  // d_CtoC between the sibling centroids at birth
    std::uint64_t seed = 0;     // sub-seed of the k=2 split
};

/// Partition of the epoch set into k clusters (labels 1..k), with the
/// centroid, width and size of every cluster and the bisecting history.
struct ClusterSolution {
    int k = 1;
    std::vector<int> assignments;        // per epoch: label 1..k
    Eigen::MatrixXd centroids;           // k x D, element-wise member means
    std::vector<double> widths;          // average member distance to the centroid
    std::vector<int> sizes;
    std::vector<double> birth_distance;  // d_CtoC of the split that created each label (NaN for the root)
    std::vector<SplitEdge> splits;       // all splits up to this k
    double objective = 0.0;              // J
    std::uint64_t seed = 0;
    long long monotonicity_violations = 0;
};

namespace detail {

inline void refresh_cluster_stats(const Eigen::MatrixXd& pts, ClusterSolution& sol) {
    const int k = sol.k;
    sol.centroids = Eigen::MatrixXd::Zero(k, pts.cols());
    sol.sizes.assign(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const int l = sol.assignments[static_cast<std::size_t>(i)] - 1;
        sol.centroids.row(l) += pts.row(i);
        ++sol.sizes[static_cast<std::size_t>(l)];
    }
    for (int l = 0; l < k; ++l) sol.centroids.row(l) /= static_cast<double>(sol.sizes[static_cast<std::size_t>(l)]);

    sol.widths.assign(static_cast<std::size_t>(k), 0.0);
    sol.objective = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const int l = sol.assignments[static_cast<std::size_t>(i)] - 1;
        const double d2 = (pts.row(i) - sol.centroids.row(l)).squaredNorm();
        sol.widths[static_cast<std::size_t>(l)] += std::sqrt(d2);
        sol.objective += d2;
    }
    for (int l = 0; l < k; ++l) sol.widths[static_cast<std::size_t>(l)] /= static_cast<double>(sol.sizes[static_cast<std::size_t>(l)]);
}

/// Relabel a 0-based k-means labeling to 1..k by first occurrence.
inline std::vector<int> relabel_by_first_occurrence(const std::vector<int>& labels, int k) {
    std::vector<int> map(static_cast<std::size_t>(k), 0);
    int next = 0;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int& m = map[static_cast<std::size_t>(labels[i])];
        if (m == 0) m = ++next;
        out[i] = m;
    }
    return out;
}

}  // namespace detail

/// Flat k-means over points (no hierarchy); labels ordered by first occurrence.
inline ClusterSolution kmeans_solution(const Eigen::MatrixXd& pts, int k, int restarts,
                                       std::uint64_t seed) {
    KMeansRun run = kmeans_points(pts, k, restarts, seed);
    ClusterSolution sol;
    sol.k = k;
    sol.seed = seed;
    sol.assignments = detail::relabel_by_first_occurrence(run.labels, k);
    sol.birth_distance.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::quiet_NaN());
    sol.monotonicity_violations = run.monotonicity_violations;
    detail::refresh_cluster_stats(pts, sol);
    return sol;
}

/// Top-down bisecting k-means: repeatedly split the cluster of maximal
/// average width with a k=2 k-means. Returns the solutions for k = 1 up to
/// k_target; stops early (shorter result) if only singletons remain.
inline std::vector<ClusterSolution> bisecting_points(const Eigen::MatrixXd& pts, int k_target,
                                                     int restarts, std::uint64_t seed) {
    const Eigen::Index n = pts.rows();
    if (k_target < 1) throw domain_error("target cluster count must be at least 1");
    if (k_target > n)
        throw domain_error("target cluster count " + std::to_string(k_target) +
                           " exceeds set size " + std::to_string(n));

    std::vector<ClusterSolution> hierarchy;
    ClusterSolution root;
    root.k = 1;
    root.seed = seed;
    root.assignments.assign(static_cast<std::size_t>(n), 1);
    root.birth_distance.assign(1, std::numeric_limits<double>::quiet_NaN());
    detail::refresh_cluster_stats(pts, root);
    hierarchy.push_back(std::move(root));

    for (int k = 2; k <= k_target; ++k) {
        const ClusterSolution& cur = hierarchy.back();

        // Widest cluster; ties prefer the larger, then the lower label, so
        // duplicate-heavy sets still split down to all singletons.
        int target = 1;
        for (int l = 2; l <= cur.k; ++l) {
            const double w = cur.widths[static_cast<std::size_t>(l - 1)];
            const double wt = cur.widths[static_cast<std::size_t>(target - 1)];
            if (w > wt || (w == wt && cur.sizes[static_cast<std::size_t>(l - 1)] >
                                          cur.sizes[static_cast<std::size_t>(target - 1)]))
                target = l;
        }
        if (cur.sizes[static_cast<std::size_t>(target - 1)] < 2) break;  // only singletons left

        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
            if (cur.assignments[static_cast<std::size_t>(i)] == target) members.push_back(i);
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(members.size()), pts.cols());
        for (Eigen::Index m = 0; m < sub.rows(); ++m) sub.row(m) = pts.row(members[static_cast<std::size_t>(m)]);

        const std::uint64_t split_seed = mix_seed(seed, static_cast<std::uint64_t>(k));
        KMeansRun run = kmeans_points(sub, 2, restarts, split_seed);

        ClusterSolution next = cur;
        next.k = k;
        next.monotonicity_violations = cur.monotonicity_violations + run.monotonicity_violations;
        const int keep_group = run.labels[0];  // child with the earliest epoch keeps the parent label
        for (std::size_t m = 0; m < members.size(); ++m) {
            const bool keeps = run.labels[m] == keep_group;
            next.assignments[static_cast<std::size_t>(members[m])] = keeps ? target : k;
        }
        detail::refresh_cluster_stats(pts, next);

        const double ctoc = (next.centroids.row(target - 1) - next.centroids.row(k - 1)).norm();
        next.birth_distance.resize(static_cast<std::size_t>(k));
        next.birth_distance[static_cast<std::size_t>(target - 1)] = ctoc;
        next.birth_distance[static_cast<std::size_t>(k - 1)] = ctoc;
        next.splits.push_back({target, target, k, ctoc, split_seed});
        hierarchy.push_back(std::move(next));
    }
    return hierarchy;
}

inline ClusterSolution kmeans(const MatrixSet& set, int k, int restarts, std::uint64_t seed) {
    return kmeans_solution(set.flatten(), k, restarts, seed);
}

inline std::vector<ClusterSolution> bisecting_kmeans(const MatrixSet& set, int k_target,
                                                     int restarts, std::uint64_t seed) {
    return bisecting_points(set.flatten(), k_target, restarts, seed);
}

/// Quotients xi = d_CtoC / d_width per cluster, and their mean per k.
struct KSelectionEntry {
    int k = 0;
    std::vector<double> quotients;  // per label; NaN where omitted
    int omitted = 0;                // singletons and zero-width clusters
    bool defined = false;
    double mean_contributing = std::numeric_limits<double>::quiet_NaN();  // sum / contributing
    double mean_over_k = std::numeric_limits<double>::quiet_NaN();        // sum / k
};

struct KSelectionCurve {
    std::vector<KSelectionEntry> entries;  // one per solution in the hierarchy
};

/// Child-quotient curve over a bisecting hierarchy. Singleton (and
/// zero-width) clusters have no defined quotient and are omitted from the
/// mean; both the contributing-count and the plain 1/k normalization are
/// reported.
inline KSelectionCurve k_selection(const std::vector<ClusterSolution>& hierarchy) {
    KSelectionCurve curve;
    for (const ClusterSolution& sol : hierarchy) {
        KSelectionEntry entry;
        entry.k = sol.k;
        entry.quotients.assign(static_cast<std::size_t>(sol.k),
                               std::numeric_limits<double>::quiet_NaN());
        if (sol.k < 2) {
            curve.entries.push_back(std::move(entry));
            continue;
        }
        double sum = 0.0;
        int contributing = 0;
        for (int l = 0; l < sol.k; ++l) {
            const double width = sol.widths[static_cast<std::size_t>(l)];
            if (sol.sizes[static_cast<std::size_t>(l)] < 2 || width <= 0.0) {
                ++entry.omitted;
                continue;
            }
            const double xi = sol.birth_distance[static_cast<std::size_t>(l)] / width;
            entry.quotients[static_cast<std::size_t>(l)] = xi;
            sum += xi;
            ++contributing;
        }
        if (contributing > 0) {
            entry.defined = true;
            entry.mean_contributing = sum / contributing;
            entry.mean_over_k = sum / sol.k;
        }
        curve.entries.push_back(std::move(entry));
    }
    return curve;
}

}  // namespace mstates
