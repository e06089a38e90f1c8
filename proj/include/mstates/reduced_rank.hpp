#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "mstates/correlation.hpp"
#include "mstates/errors.hpp"
#include "mstates/svd.hpp"

namespace mstates {

/// A formal data matrix with the market dyad (largest singular value)
/// removed, together with the covariance and correlation matrices built
/// from it. Rows of the data matrix stay centered automatically: the right
/// singular vectors with nonzero singular value are orthogonal to the
/// all-ones vector.
struct ReducedRankPair {
    Eigen::MatrixXd data_matrix;   // B (covariance approach) or L (correlation approach)
    Eigen::VectorXd volatilities;  // diagonal of the formal volatility matrix
    Eigen::MatrixXd covariance;    // (1/T) B B^T resp. (1/T) L L^T
    CorrelationMatrix correlation; // rescaled to unit diagonal
    bool degenerate_market = false; // top two singular values tied; "the market" ill-defined
};

namespace detail {

constexpr double kDegenerateTol = 1e-10;  // relative gap below which the top dyad is ambiguous

inline ReducedRankPair reduce_data_matrix(const Eigen::MatrixXd& data, double vol_scale,
                                          MatrixKind kind, int epoch, const std::string& mid_date) {
    SpectralDecomposition dec = svd(data);

    ReducedRankPair out;
    const double top = dec.singular_values(0);
    if (dec.singular_values.size() > 1)
        out.degenerate_market = (top - dec.singular_values(1)) <= kDegenerateTol * top;

    out.data_matrix = data - top * dec.left.col(0) * dec.right.col(0).transpose();
    out.covariance = covariance(out.data_matrix);
    out.volatilities = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();

    const double threshold = 1e-12 * vol_scale;
    for (Eigen::Index i = 0; i < out.volatilities.size(); ++i)
        if (out.volatilities(i) <= threshold)
            throw domain_error("row " + std::to_string(i) + " of epoch " + std::to_string(epoch) +
                               " has zero variance after removing the market dyad");

    Eigen::VectorXd inv = out.volatilities.cwiseInverse();
    out.correlation.values = inv.asDiagonal() * out.covariance * inv.asDiagonal();
    detail::symmetrize_unit_diagonal(out.correlation.values);
    out.correlation.kind = kind;
    out.correlation.epoch = epoch;
    out.correlation.mid_date = mid_date;
    return out;
}

}  // namespace detail

/// Covariance approach: remove the market dyad from the centered data matrix A.
inline ReducedRankPair reduce_cov(const NormalizedEpoch& n) {
    return detail::reduce_data_matrix(n.centered, n.sigma.maxCoeff(), MatrixKind::reduced_rank_cov,
                                      n.index, n.mid_date);
}

/// Correlation approach: remove the market dyad from the standardized data matrix M.
inline ReducedRankPair reduce_corr(const NormalizedEpoch& n) {
    return detail::reduce_data_matrix(n.standardized, 1.0, MatrixKind::reduced_rank_corr,
                                      n.index, n.mid_date);
}

/// Closed-form route: subtract the top eigen-dyad from a covariance or
/// correlation matrix and rescale by the reduced diagonal. Independent of
/// the data-matrix route (eigendecomposition instead of SVD); the two agree
/// without correction terms.
inline Eigen::MatrixXd reduced_correlation_closed_form(const Eigen::MatrixXd& matrix) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix);
    if (eig.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    const Eigen::Index last = eig.eigenvalues().size() - 1;  // eigenvalues ascending in Eigen
    const double lambda = eig.eigenvalues()(last);
    const Eigen::VectorXd u = eig.eigenvectors().col(last);

    Eigen::MatrixXd reduced = matrix - lambda * u * u.transpose();
    Eigen::VectorXd vol = reduced.diagonal().cwiseMax(0.0).cwiseSqrt();
    const double threshold = 1e-12 * std::sqrt(std::max(0.0, matrix.diagonal().maxCoeff()));
    for (Eigen::Index i = 0; i < vol.size(); ++i)
        if (vol(i) <= threshold)
            throw domain_error("row " + std::to_string(i) +
                               " has zero variance after removing the market dyad");

    Eigen::VectorXd inv = vol.cwiseInverse();
    Eigen::MatrixXd corr = inv.asDiagonal() * reduced * inv.asDiagonal();
    detail::symmetrize_unit_diagonal(corr);
    return corr;
}

}  // namespace mstates
