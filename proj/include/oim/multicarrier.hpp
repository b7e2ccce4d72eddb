#pragma once

#include <utility>
#include <vector>

#include "oim/linalg.hpp"

namespace oim {

/// Diagonal of a per-user transmit weight matrix over the subcarriers,
/// constrained to unit norm.
struct WeightVector {
  Vector w;
};

/// Minimizes the total projected leakage sum_l ||Proj_{U_l}(w .* H_l)||^2
/// over unit-norm diagonal weights.
///
/// Writing D_l = diag(H_l) and P_l = U_l U_l^H, the objective is the
/// quadratic form w^H (sum_l D_l^H P_l D_l) w, so the minimizer is the
/// unit eigenvector of the smallest eigenvalue and the objective is that
/// eigenvalue.
std::pair<WeightVector, double> optimize_weight(
    const std::vector<Vector>& cross_channels,
    const std::vector<OrthonormalBasis>& kernels);

/// Weighted scheduling metric sum_l ||Proj_{U_l}(w .* H_l)||^2 for an
/// arbitrary weight vector.
double weighted_metric(const WeightVector& weight,
                       const std::vector<Vector>& cross_channels,
                       const std::vector<OrthonormalBasis>& kernels);

}  // namespace oim
