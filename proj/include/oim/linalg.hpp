#pragma once

#include <Eigen/Dense>
#include <utility>

#include "oim/rng.hpp"

namespace oim {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Orthonormal set of columns spanning a subspace of C^{ambient_dim}.
/// Pairwise inner products satisfy |<c_a, c_b> - delta_ab| <= 1e-10.
struct OrthonormalBasis {
  Matrix columns;  // ambient_dim x basis_dim

  Eigen::Index ambient_dim() const { return columns.rows(); }
  Eigen::Index basis_dim() const { return columns.cols(); }
};

/// Moore-Penrose pseudo-inverse of a full-column-rank matrix (rows >= cols).
/// Throws RankDeficient when the smallest singular value drops below
/// 1e-10 times the largest.
Matrix pseudo_inverse(const Matrix& A);

/// Haar-column basis: orthonormalizes iid complex-Gaussian columns, so the
/// resulting subspace is invariant in distribution under unitary rotation.
OrthonormalBasis random_orthonormal(Eigen::Index ambient_dim,
                                    Eigen::Index basis_dim, RandomStream& rng);

/// Orthonormal basis of the orthogonal complement of span(V).
OrthonormalBasis null_space_basis(const OrthonormalBasis& V);

/// Orthogonal projection of h onto span(U): sum_m (u_m^H h) u_m.
Vector project_onto(const OrthonormalBasis& U, const Vector& h);

/// Smallest eigenvalue and a unit eigenvector of a Hermitian PSD matrix.
std::pair<double, Vector> smallest_eigpair(const Matrix& A);

}  // namespace oim
