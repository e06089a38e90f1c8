#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mstates/clustering.hpp"
#include "mstates/correlation.hpp"
#include "mstates/epochs.hpp"
#include "mstates/errors.hpp"
#include "mstates/pca.hpp"

namespace mstates {

/// A dated crisis-event marker for plot annotation.
struct EventMarker {
    std::string date;
    std::string label;
};

/// Market-state label per epoch, renumbered by first temporal appearance:
/// the state seen first is 1, the next new state 2, and so on.
struct StateTimeline {
    std::vector<std::string> mid_dates;
    std::vector<int> states;
    int state_count = 0;
    std::vector<int> relabel_map;      // original cluster label -> timeline state (1-based)
    std::vector<EventMarker> events;
};

namespace detail {
inline std::vector<int> first_appearance_map(const std::vector<int>& assignments, int k) {
    std::vector<int> map(static_cast<std::size_t>(k) + 1, 0);
    int next = 0;
    for (int label : assignments) {
        int& m = map[static_cast<std::size_t>(label)];
        if (m == 0) m = ++next;
    }
    return map;
}
}  // namespace detail

inline StateTimeline build_timeline(const ClusterSolution& sol,
                                    const std::vector<std::string>& mid_dates) {
    if (sol.assignments.size() != mid_dates.size())
        throw domain_error("cluster solution does not cover all epochs");
    StateTimeline out;
    out.mid_dates = mid_dates;
    out.relabel_map = detail::first_appearance_map(sol.assignments, sol.k);
    out.states.reserve(sol.assignments.size());
    for (int label : sol.assignments)
        out.states.push_back(out.relabel_map[static_cast<std::size_t>(label)]);
    out.state_count = sol.k;
    return out;
}

inline StateTimeline build_timeline(const ClusterSolution& sol, const MatrixSet& set) {
    std::vector<std::string> dates;
    dates.reserve(set.items.size());
    for (const auto& m : set.items) dates.push_back(m.mid_date);
    return build_timeline(sol, dates);
}

inline StateTimeline build_timeline(const ClusterSolution& sol,
                                    const std::vector<EpochWindow>& epochs) {
    std::vector<std::string> dates;
    dates.reserve(epochs.size());
    for (const auto& w : epochs) dates.push_back(w.mid_date);
    return build_timeline(sol, dates);
}

/// Element-wise average of the matrices in one market state.
struct TypicalState {
    int state = 0;               // timeline numbering
    Eigen::MatrixXd matrix;
    int member_count = 0;
    double mean_corr = 0.0;
};

struct TypicalStates {
    std::vector<TypicalState> states;      // ordered by timeline state number
    Eigen::MatrixXd overall_average;       // element-wise average over all epochs
    double overall_mean_corr = 0.0;
};

/// Typical market states of a cluster solution, in first-appearance order.
inline TypicalStates typical_states(const MatrixSet& set, const ClusterSolution& sol) {
    if (sol.assignments.size() != set.items.size())
        throw domain_error("cluster solution does not cover all epochs");
    const Eigen::Index dim = set.dim();
    const std::vector<int> relabel = detail::first_appearance_map(sol.assignments, sol.k);

    TypicalStates out;
    out.states.resize(static_cast<std::size_t>(sol.k));
    for (int s = 0; s < sol.k; ++s) {
        out.states[static_cast<std::size_t>(s)].state = s + 1;
        out.states[static_cast<std::size_t>(s)].matrix = Eigen::MatrixXd::Zero(dim, dim);
    }
    out.overall_average = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t n = 0; n < set.items.size(); ++n) {
        const int s = relabel[static_cast<std::size_t>(sol.assignments[n])] - 1;
        out.states[static_cast<std::size_t>(s)].matrix += set.items[n].values;
        out.states[static_cast<std::size_t>(s)].member_count += 1;
        out.overall_average += set.items[n].values;
    }
    for (auto& state : out.states) {
        state.matrix /= static_cast<double>(state.member_count);
        state.mean_corr = mean_correlation(state.matrix);
    }
    out.overall_average /= static_cast<double>(set.items.size());
    out.overall_mean_corr = mean_correlation(out.overall_average);
    return out;
}

/// A label change between consecutive epochs.
struct TurningPoint {
    std::string from_date;  // mid-date of the epoch before the jump
    std::string to_date;    // mid-date of the epoch after the jump
    int from_state = 0;
    int to_state = 0;
    bool is_new_state = false;  // the target state was never seen before
};

struct TurningPointReport {
    std::vector<TurningPoint> points;
};

inline TurningPointReport turning_points(const StateTimeline& timeline) {
    if (timeline.states.size() < 2)
        throw domain_error("turning points need at least 2 epochs");
    TurningPointReport out;
    int seen_max = timeline.states.empty() ? 0 : timeline.states.front();
    for (std::size_t i = 1; i < timeline.states.size(); ++i) {
        const int prev = timeline.states[i - 1];
        const int cur = timeline.states[i];
        if (cur != prev) {
            // first-appearance numbering: a state is new iff its number
            // exceeds every number seen so far
            out.points.push_back({timeline.mid_dates[i - 1], timeline.mid_dates[i], prev, cur,
                                  cur > seen_max});
        }
        seen_max = std::max(seen_max, cur);
    }
    return out;
}

/// Market-state analysis of de-meaned matrices: strip the lower-triangle
/// mean from each standard correlation matrix, cluster the residual
/// structure, and report the timeline and typical states.
struct DemeanedAnalysis {
    MatrixSet demeaned;
    std::vector<ClusterSolution> hierarchy;
    StateTimeline timeline;
    TypicalStates states;
    bool degenerate = false;   // all de-meaned matrices identical; partition carries no information
};

inline DemeanedAnalysis demeaned_state_analysis(const MatrixSet& standard, int k, int restarts,
                                                std::uint64_t seed) {
    if (standard.kind() != MatrixKind::standard)
        throw domain_error("de-meaned analysis expects standard correlation matrices");
    std::vector<CorrelationMatrix> items;
    items.reserve(standard.items.size());
    for (const auto& m : standard.items) items.push_back(demean_matrix(m));

    DemeanedAnalysis out;
    out.demeaned = MatrixSet(std::move(items));

    double spread = 0.0;
    for (int n = 1; n < out.demeaned.size(); ++n)
        spread = std::max(spread, distance(out.demeaned.items[0],
                                           out.demeaned.items[static_cast<std::size_t>(n)]));
    out.degenerate = spread == 0.0;

    out.hierarchy = bisecting_kmeans(out.demeaned, k, restarts, seed);
    const ClusterSolution& sol = out.hierarchy.back();
    out.timeline = build_timeline(sol, out.demeaned);
    out.states = typical_states(out.demeaned, sol);
    return out;
}

}  // namespace mstates
