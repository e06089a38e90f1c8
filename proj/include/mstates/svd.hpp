#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "mstates/errors.hpp"

namespace mstates {

/// Full singular value decomposition X = U diag(s) V^T with a fixed sign
/// convention: the largest-magnitude entry of each left vector is positive
/// (dyads are invariant under the paired sign flip).
struct SpectralDecomposition {
    Eigen::MatrixXd left;             // U: K x K orthogonal
    Eigen::VectorXd singular_values;  // min(K, T) values, descending
    Eigen::MatrixXd right;            // V: T x T orthogonal

    /// U diag(s) V^T, for reconstruction checks.
    Eigen::MatrixXd reconstruct() const {
        const Eigen::Index k = left.rows();
        const Eigen::Index t = right.rows();
        Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(k, t);
        alpha.diagonal().head(singular_values.size()) = singular_values;
        return left * alpha * right.transpose();
    }
};

namespace detail {
inline void fix_sign(Eigen::MatrixXd& vecs, Eigen::Index col) {
    Eigen::Index arg = 0;
    vecs.col(col).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, col) < 0.0) vecs.col(col) = -vecs.col(col);
}
}  // namespace detail

inline SpectralDecomposition svd(const Eigen::MatrixXd& x) {
    if (!x.allFinite()) throw numerical_error("SVD input contains non-finite entries");

    Eigen::BDCSVD<Eigen::MatrixXd> solver(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success) throw numerical_error("SVD failed to converge");

    SpectralDecomposition out;
    out.left = solver.matrixU();
    out.singular_values = solver.singularValues();
    out.right = solver.matrixV();

    const Eigen::Index paired = std::min(out.left.cols(), out.right.cols());
    for (Eigen::Index t = 0; t < paired; ++t) {
        Eigen::Index arg = 0;
        out.left.col(t).cwiseAbs().maxCoeff(&arg);
        if (out.left(arg, t) < 0.0) {
            out.left.col(t) = -out.left.col(t);
            out.right.col(t) = -out.right.col(t);
        }
    }
    // Null-space columns have no partner; fix each by its own largest entry.
    for (Eigen::Index t = paired; t < out.left.cols(); ++t) detail::fix_sign(out.left, t);
    for (Eigen::Index t = paired; t < out.right.cols(); ++t) detail::fix_sign(out.right, t);
    return out;
}

/// Count of eigenvalues above `rel_threshold` times the largest one.
inline int numerical_rank(const Eigen::MatrixXd& symmetric, double rel_threshold = 1e-8) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric);
    if (eig.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    const Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs();
    const double cutoff = rel_threshold * ev.maxCoeff();
    return static_cast<int>((ev.array() > cutoff).count());
}

}  // namespace mstates
