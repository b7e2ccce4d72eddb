#include "oim/multicarrier.hpp"

#include "oim/errors.hpp"

namespace oim {

namespace {

void check_dims(const std::vector<Vector>& cross_channels,
                const std::vector<OrthonormalBasis>& kernels) {
  if (cross_channels.empty() || cross_channels.size() != kernels.size()) {
    throw DimensionError("multicarrier: need one kernel per cross channel");
  }
  const Eigen::Index nsub = cross_channels.front().size();
  for (std::size_t l = 0; l < cross_channels.size(); ++l) {
    if (cross_channels[l].size() != nsub ||
        kernels[l].ambient_dim() != nsub) {
      throw DimensionError("multicarrier: subcarrier dimensions disagree");
    }
  }
}

}  // namespace

std::pair<WeightVector, double> optimize_weight(
    const std::vector<Vector>& cross_channels,
    const std::vector<OrthonormalBasis>& kernels) {
  check_dims(cross_channels, kernels);
  const Eigen::Index nsub = cross_channels.front().size();
  Matrix A = Matrix::Zero(nsub, nsub);
  for (std::size_t l = 0; l < cross_channels.size(); ++l) {
    const Matrix D = cross_channels[l].asDiagonal();
    const Matrix proj = kernels[l].columns.adjoint() * D;  // S x Nsub
    A += proj.adjoint() * proj;
  }
  A = (A + A.adjoint().eval()) / 2.0;  // scrub rounding asymmetry
  auto [lambda, w] = smallest_eigpair(A);
  return {WeightVector{std::move(w)}, std::max(lambda, 0.0)};
}

double weighted_metric(const WeightVector& weight,
                       const std::vector<Vector>& cross_channels,
                       const std::vector<OrthonormalBasis>& kernels) {
  check_dims(cross_channels, kernels);
  if (weight.w.size() != cross_channels.front().size()) {
    throw DimensionError("weighted_metric: weight length mismatch");
  }
  double metric = 0.0;
  for (std::size_t l = 0; l < cross_channels.size(); ++l) {
    const Vector weighted = weight.w.cwiseProduct(cross_channels[l]);
    metric += (kernels[l].columns.adjoint() * weighted).squaredNorm();
  }
  return metric;
}

}  // namespace oim
