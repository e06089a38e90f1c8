#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>

#include "mstates/clustering.hpp"
#include "mstates/errors.hpp"

namespace mstates {

/// Epoch coordinates in the eigenbasis of the flattened-matrix covariance.
///
/// Centering across epochs is a rigid translation and the basis is
/// orthonormal, so pairwise Euclidean distances between coordinate rows
/// equal the distances between the flattened matrices. Clustering the
/// N_ep-1 dimensional coordinates instead of the K^2 entries is therefore
/// equivalent and much cheaper.
struct PcaProjection {
    Eigen::MatrixXd coordinates;  // N_ep x (N_ep - 1), one row per epoch
    Eigen::MatrixXd basis;        // K^2 x (N_ep - 1) eigenvectors of the epoch covariance
    Eigen::VectorXd eigenvalues;  // N_ep - 1, descending
    Eigen::Index matrix_dim = 0;  // K
    MatrixKind kind = MatrixKind::standard;
};

inline PcaProjection pca_project(const MatrixSet& set) {
    const int n = set.size();
    if (n < 2) throw domain_error("PCA projection needs at least 2 matrices");

    // K^2 x N_ep matrix of flattened epochs, rows centered across epochs.
    Eigen::MatrixXd f = set.flatten().transpose();
    f.colwise() -= f.rowwise().mean().eval();

    Eigen::BDCSVD<Eigen::MatrixXd> solver(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) throw numerical_error("PCA decomposition failed");

    PcaProjection out;
    out.matrix_dim = set.dim();
    out.kind = set.kind();
    const Eigen::Index keep = n - 1;  // row centering forces one zero eigenvalue
    const Eigen::Index have = std::min<Eigen::Index>(keep, solver.singularValues().size());
    out.coordinates = Eigen::MatrixXd::Zero(n, keep);
    out.coordinates.leftCols(have) =
        solver.matrixV().leftCols(have) * solver.singularValues().head(have).asDiagonal();
    out.basis = solver.matrixU().leftCols(have);
    out.eigenvalues = solver.singularValues().head(have).array().square() / static_cast<double>(n);
    return out;
}

inline ClusterSolution kmeans(const PcaProjection& projection, int k, int restarts,
                              std::uint64_t seed) {
    return kmeans_solution(projection.coordinates, k, restarts, seed);
}

inline std::vector<ClusterSolution> bisecting_kmeans(const PcaProjection& projection, int k_target,
                                                     int restarts, std::uint64_t seed) {
    return bisecting_points(projection.coordinates, k_target, restarts, seed);
}

}  // namespace mstates
