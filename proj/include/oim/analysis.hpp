#pragma once

#include <span>
#include <utility>
#include <vector>

namespace oim {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
/// series for x < a + 1 and continued fraction otherwise, relative error
/// about 1e-12.
double regularized_lower_gamma(double a, double x);

/// Unregularized lower incomplete gamma.
double lower_incomplete_gamma(double a, double x);

/// CDF of the scheduling metric: gamma(a, l/2) / Gamma(a) with
/// a = (K - 1) S.
double lif_cdf(double shape, double l);

/// Closed-form constants sandwiching the metric CDF for l in [0, 2).
struct BoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// C1 = e^{-1} 2^{-a} / (a Gamma(a)) and C2 = 2 * 2^{-a} / (a Gamma(a))
/// with a = (K - 1) S; their ratio is always 2e.
BoundConstants lemma1_constants(int cells, int streams);

/// True iff C1 l^a <= F_L(l) <= C2 l^a at every grid point (slack 1e-12).
/// Grid values must lie in [0, 2).
bool check_lemma1(int cells, int streams, std::span<const double> grid);

/// True iff (1/z) x^z e^{-1} <= gamma(z, x) <= (2/z) x^z at every grid
/// point. Grid values must lie in [0, 1).
bool check_gamma_inequalities(double z, std::span<const double> grid);

/// Total degrees-of-freedom upper bound K N M / (N + 1); always below the
/// genie bound K M, which it approaches as N grows.
double dof_upper_bound(int cells, int users, int antennas);

/// Fraction of trials in which every cell's aggregate scheduled LIF times
/// snr stays at or below epsilon. One inner vector of per-cell LIF sums
/// per trial.
double estimate_p_oim(const std::vector<std::vector<double>>& trial_lif_sums,
                      double snr, double epsilon);

/// Least-squares slope of log(value) against log(x); at least 3 points,
/// all values positive.
double fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace oim
