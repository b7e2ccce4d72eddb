#include <doctest.h>

#include <cmath>
#include <vector>

#include "oim/errors.hpp"
#include "oim/multicarrier.hpp"
#include "oim/rng.hpp"

using namespace oim;

namespace {

Vector random_vector(Eigen::Index n, RandomStream& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.next_cgaussian();
  return v;
}

Vector random_unit(Eigen::Index n, RandomStream& rng) {
  Vector v = random_vector(n, rng);
  return v / v.norm();
}

}  // namespace

TEST_CASE("optimize_weight with a single subcarrier") {
  RandomStream rng(1);
  std::vector<Vector> cross{random_vector(1, rng), random_vector(1, rng)};
  std::vector<OrthonormalBasis> kernels{
      OrthonormalBasis{Matrix::Identity(1, 1)},
      OrthonormalBasis{Matrix::Identity(1, 1)}};
  auto [weight, objective] = optimize_weight(cross, kernels);
  CHECK(std::abs(std::abs(weight.w(0)) - 1.0) < 1e-10);
  const double expected =
      cross[0].squaredNorm() + cross[1].squaredNorm();
  CHECK(objective == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("optimize_weight on an interference-free instance") {
  // H orthogonal to its kernel: kernel = e1, channel supported on e2
  Matrix k1 = Matrix::Zero(2, 1);
  k1(0, 0) = 1.0;
  Vector h = Vector::Zero(2);
  h(1) = Complex(1.3, -0.4);
  // (w .* h) has no component on subcarrier 1, so nothing projects onto e1
  // only when w(1) is free: the quadratic form is singular.
  auto [weight, objective] =
      optimize_weight({h}, {OrthonormalBasis{k1}});
  CHECK(objective < 1e-12);
  CHECK(weight.w.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("optimize_weight matches random search and the 2x2 closed form") {
  RandomStream rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Vector> cross{random_vector(2, rng)};
    std::vector<OrthonormalBasis> kernels{
        OrthonormalBasis{random_unit(2, rng)}};
    auto [weight, objective] = optimize_weight(cross, kernels);

    // closed-form smallest eigenvalue of the 2x2 quadratic form
    const Matrix D = cross[0].asDiagonal();
    const Matrix P = kernels[0].columns * kernels[0].columns.adjoint();
    const Matrix A = D.adjoint() * P * D;
    const double a = A(0, 0).real();
    const double c = A(1, 1).real();
    const double b2 = std::norm(A(0, 1));
    const double closed =
        ((a + c) - std::sqrt((a - c) * (a - c) + 4.0 * b2)) / 2.0;
    CHECK(objective == doctest::Approx(closed).epsilon(1e-9));

    double best = 1e300;
    for (int i = 0; i < 100000; ++i) {
      const Vector w = random_unit(2, rng);
      best = std::min(best, weighted_metric({w}, cross, kernels));
    }
    CHECK(objective <= best + 1e-9);
    CHECK(best - objective < 1e-3);
  }
}

TEST_CASE("weighted_metric properties") {
  RandomStream rng(3);
  const int nsub = 4;
  std::vector<Vector> cross{random_vector(nsub, rng), random_vector(nsub, rng)};
  std::vector<OrthonormalBasis> kernels;
  for (int l = 0; l < 2; ++l) {
    Matrix g(nsub, 2);
    for (int c = 0; c < 2; ++c) g.col(c) = random_vector(nsub, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    kernels.push_back(
        OrthonormalBasis{qr.householderQ() * Matrix::Identity(nsub, 2)});
  }
  auto [opt, objective] = optimize_weight(cross, kernels);

  // definition match at the optimum
  CHECK(weighted_metric(opt, cross, kernels) ==
        doctest::Approx(objective).epsilon(1e-9));

  // uniform weights can only do worse
  const Vector uniform =
      Vector::Constant(nsub, Complex(1.0 / std::sqrt(double(nsub)), 0.0));
  CHECK(weighted_metric({uniform}, cross, kernels) >= objective - 1e-12);

  // global optimality against random unit vectors
  for (int i = 0; i < 2000; ++i) {
    CHECK(weighted_metric({random_unit(nsub, rng)}, cross, kernels) >=
          objective - 1e-12);
  }

  // phase invariance
  const Vector rotated = opt.w * std::polar(1.0, 1.234);
  CHECK(weighted_metric({rotated}, cross, kernels) ==
        doctest::Approx(objective).epsilon(1e-9));

  // term-by-term oracle
  const Vector w = random_unit(nsub, rng);
  double manual = 0.0;
  for (int l = 0; l < 2; ++l) {
    const Vector weighted = w.cwiseProduct(cross[l]);
    manual += (kernels[l].columns * (kernels[l].columns.adjoint() * weighted))
                  .squaredNorm();
  }
  CHECK(weighted_metric({w}, cross, kernels) ==
        doctest::Approx(manual).epsilon(1e-10));
}

TEST_CASE("dimension errors") {
  RandomStream rng(4);
  std::vector<Vector> cross{random_vector(2, rng)};
  std::vector<OrthonormalBasis> kernels{OrthonormalBasis{random_unit(3, rng)}};
  CHECK_THROWS_AS(optimize_weight(cross, kernels), DimensionError);
  CHECK_THROWS_AS(optimize_weight({}, {}), DimensionError);
  std::vector<OrthonormalBasis> ok{OrthonormalBasis{random_unit(2, rng)}};
  WeightVector wrong{random_unit(3, rng)};
  CHECK_THROWS_AS(weighted_metric(wrong, cross, ok), DimensionError);
}
