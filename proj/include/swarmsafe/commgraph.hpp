#pragma once

#include <span>
#include <vector>

#include "swarmsafe/core.hpp"

namespace swarmsafe {

/// Symmetric N x N Euclidean distance matrix with zero diagonal.
DenseMatrix pairwise_distances(std::span<const Vec2> positions);

/// One hysteresis update of every edge indicator:
///   prev=0, d >= r_com - eps  -> 0      prev=1, d >= r_com  -> 0
///   prev=1, d <  r_com        -> 1      prev=0, d <  r_com - eps -> 1
/// Throws DomainError if `distances` is not symmetric or sizes disagree.
SigmaMatrix update_sigma(const SigmaMatrix& prev, const DenseMatrix& distances, double r_com, double epsilon);

/// Start-of-mission indicator: sigma_ij = 1 iff d_ij < r_com (no band).
SigmaMatrix initial_sigma(const DenseMatrix& distances, double r_com);

/// Raw disk graph: a_ij = 1 iff d_ij < r_com.
AdjacencyMatrix adjacency_from_distances(const DenseMatrix& distances, double r_com);
AdjacencyMatrix adjacency_from_positions(std::span<const Vec2> positions, double r_com);

/// L = D - A.
DenseMatrix laplacian(const AdjacencyMatrix& adjacency);

struct SymmetricEigen {
    std::vector<double> values;  ///< ascending
    DenseMatrix vectors;         ///< column k is the eigenvector of values[k]
    int sweeps{0};
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `tolerance` (or `max_sweeps` is hit). Throws DomainError on non-symmetric input.
SymmetricEigen jacobi_eigen(const DenseMatrix& symmetric, double tolerance = 1e-12, int max_sweeps = 100);

/// Second-smallest Laplacian eigenvalue, clamped below at 0.
double fiedler_value(const DenseMatrix& laplacian);

/// Breadth-first search from vertex 0 reaches every vertex.
bool is_connected(const AdjacencyMatrix& adjacency);

/// Numerical zero guard for lambda2.
inline constexpr double kConnectivityThreshold = 1e-9;

} // namespace swarmsafe
