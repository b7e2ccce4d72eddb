#include "oim/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "oim/errors.hpp"

namespace oim {

namespace {
constexpr double kRankTol = 1e-10;
}

Matrix pseudo_inverse(const Matrix& A) {
  if (A.rows() < A.cols()) {
    throw DimensionError("pseudo_inverse: expected rows >= cols");
  }
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= kRankTol * sv(0)) {
    throw RankDeficient("pseudo_inverse: matrix is rank deficient");
  }
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() *
         svd.matrixU().adjoint();
}

OrthonormalBasis random_orthonormal(Eigen::Index ambient_dim,
                                    Eigen::Index basis_dim,
                                    RandomStream& rng) {
  if (basis_dim <= 0 || basis_dim > ambient_dim) {
    throw DimensionError("random_orthonormal: need 0 < basis_dim <= ambient_dim");
  }
  for (;;) {
    Matrix G(ambient_dim, basis_dim);
    for (Eigen::Index c = 0; c < basis_dim; ++c) {
      for (Eigen::Index r = 0; r < ambient_dim; ++r) {
        G(r, c) = rng.next_cgaussian();
      }
    }
    Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankTol * sv(0)) {
      continue;  // degenerate draw, probability zero
    }
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(ambient_dim, basis_dim);
    return OrthonormalBasis{std::move(Q)};
  }
}

OrthonormalBasis null_space_basis(const OrthonormalBasis& V) {
  const Eigen::Index d = V.ambient_dim();
  const Eigen::Index r = V.basis_dim();
  if (r >= d) {
    throw DimensionError("null_space_basis: basis already spans the space");
  }
  Eigen::HouseholderQR<Matrix> qr(V.columns);
  Matrix Q = qr.householderQ();
  return OrthonormalBasis{Q.rightCols(d - r)};
}

Vector project_onto(const OrthonormalBasis& U, const Vector& h) {
  if (h.size() != U.ambient_dim()) {
    throw DimensionError("project_onto: vector length mismatch");
  }
  return U.columns * (U.columns.adjoint() * h);
}

std::pair<double, Vector> smallest_eigpair(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw DimensionError("smallest_eigpair: matrix must be square");
  }
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw NotHermitian("smallest_eigpair: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  Vector w = es.eigenvectors().col(0);
  w.normalize();
  return {es.eigenvalues()(0), std::move(w)};
}

}  // namespace oim
