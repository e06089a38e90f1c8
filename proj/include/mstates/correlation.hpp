#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "mstates/epochs.hpp"
#include "mstates/errors.hpp"

namespace mstates {

/// Which construction produced a K x K epoch matrix.
enum class MatrixKind {
    standard,          // Pearson correlation of standardized returns
    reduced_rank_cov,  // market dyad removed from the covariance, then rescaled
    reduced_rank_corr, // market dyad removed from the correlation, then rescaled
    demeaned,          // standard correlation minus its lower-triangle mean, zero diagonal
};

inline const char* kind_name(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::standard: return "standard";
        case MatrixKind::reduced_rank_cov: return "reduced_rank_cov";
        case MatrixKind::reduced_rank_corr: return "reduced_rank_corr";
        case MatrixKind::demeaned: return "demeaned";
    }
    return "?";
}

inline MatrixKind kind_from_name(const std::string& name) {
    for (MatrixKind kind : {MatrixKind::standard, MatrixKind::reduced_rank_cov,
                            MatrixKind::reduced_rank_corr, MatrixKind::demeaned})
        if (name == kind_name(kind)) return kind;
    throw config_error("unknown matrix kind '" + name + "'");
}

/// K x K epoch matrix with its kind and epoch stamp.
struct CorrelationMatrix {
    Eigen::MatrixXd values;
    MatrixKind kind = MatrixKind::standard;
    int epoch = 0;          // n_ep, 1-based
    std::string mid_date;
};

/// Row-centered and row-standardized views of one epoch window.
///
/// Both normalizations use the population convention (divisor T).
struct NormalizedEpoch {
    int index = 0;
    int length = 0;            // T
    std::string mid_date;
    Eigen::MatrixXd centered;      // A: rows sum to zero
    Eigen::MatrixXd standardized;  // M: rows have mean 0, standard deviation 1
    Eigen::VectorXd mu;            // per-row drift
    Eigen::VectorXd sigma;         // per-row volatility
};

/// Center and standardize the rows of an epoch window.
/// Throws domain_error for a zero-volatility (dead) row.
inline NormalizedEpoch normalize(const EpochWindow& w) {
    const Eigen::Index k = w.raw.rows();
    const double t = static_cast<double>(w.raw.cols());

    NormalizedEpoch out;
    out.index = w.index;
    out.length = w.length;
    out.mid_date = w.mid_date;
    out.mu = w.raw.rowwise().mean();
    out.centered = w.raw.colwise() - out.mu;
    out.sigma = (out.centered.array().square().rowwise().sum() / t).sqrt();
    for (Eigen::Index i = 0; i < k; ++i)
        if (!(out.sigma(i) > 0.0))
            throw domain_error("zero volatility in row " + std::to_string(i) + " of epoch " +
                               std::to_string(w.index) + " (dead ticker in this epoch)");
    out.standardized = out.sigma.cwiseInverse().asDiagonal() * out.centered;
    return out;
}

namespace detail {
/// Exact symmetry and unit diagonal; both hold analytically for every
/// correlation construction here, up to floating-point noise from the GEMM.
inline void symmetrize_unit_diagonal(Eigen::MatrixXd& m) {
    m = ((m + m.transpose()) * 0.5).eval();
    m.diagonal().setOnes();
}
}  // namespace detail

/// Pearson correlation C = (1/T) M M^T of a row-standardized matrix.
inline CorrelationMatrix pearson(const NormalizedEpoch& n) {
    CorrelationMatrix out;
    out.kind = MatrixKind::standard;
    out.epoch = n.index;
    out.mid_date = n.mid_date;
    out.values = n.standardized * n.standardized.transpose() / static_cast<double>(n.length);
    detail::symmetrize_unit_diagonal(out.values);
    return out;
}

/// Covariance Sigma = (1/T) A A^T of a row-centered matrix.
inline Eigen::MatrixXd covariance(const Eigen::MatrixXd& centered) {
    Eigen::MatrixXd sigma = centered * centered.transpose() / static_cast<double>(centered.cols());
    return ((sigma + sigma.transpose()) * 0.5).eval();
}

/// Subtract the mean of the strictly-lower-triangle entries from all
/// off-diagonal entries and zero the diagonal. The result is not a
/// correlation matrix.
inline CorrelationMatrix demean_matrix(const CorrelationMatrix& c) {
    if (c.kind != MatrixKind::standard)
        throw domain_error("demean_matrix expects a standard correlation matrix");
    const Eigen::Index k = c.values.rows();
    double sum = 0.0;
    for (Eigen::Index i = 1; i < k; ++i)
        for (Eigen::Index j = 0; j < i; ++j) sum += c.values(i, j);
    const double npairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
    const double mean = npairs > 0.0 ? sum / npairs : 0.0;

    CorrelationMatrix out;
    out.kind = MatrixKind::demeaned;
    out.epoch = c.epoch;
    out.mid_date = c.mid_date;
    out.values = c.values.array() - mean;
    out.values.diagonal().setZero();
    return out;
}

/// Arithmetic mean of the strictly off-diagonal entries.
inline double mean_correlation(const Eigen::MatrixXd& m) {
    const Eigen::Index k = m.rows();
    if (k < 2) throw domain_error("mean correlation needs K >= 2");
    const double total = m.sum() - m.diagonal().sum();
    return total / (static_cast<double>(k) * static_cast<double>(k - 1));
}

inline double mean_correlation(const CorrelationMatrix& c) { return mean_correlation(c.values); }

}  // namespace mstates
