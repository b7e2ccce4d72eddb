#include "oim/analysis.hpp"

#include <cmath>
#include <limits>

#include "oim/errors.hpp"

namespace oim {

namespace {

constexpr double kRelTol = 1e-14;
constexpr int kMaxIter = 500;

/// Series expansion of P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kRelTol) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Modified Lentz continued fraction for Q(a, x), stable for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kRelTol) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
  if (a <= 0.0) throw DomainError("regularized_lower_gamma: shape must be > 0");
  if (x < 0.0) throw DomainError("regularized_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double lower_incomplete_gamma(double a, double x) {
  return regularized_lower_gamma(a, x) * std::tgamma(a);
}

double lif_cdf(double shape, double l) {
  if (l < 0.0) throw DomainError("lif_cdf: l must be >= 0");
  return regularized_lower_gamma(shape, l / 2.0);
}

BoundConstants lemma1_constants(int cells, int streams) {
  if (cells < 2) throw DomainError("lemma1_constants: need K >= 2");
  if (streams < 1) throw DomainError("lemma1_constants: need S >= 1");
  const double a = static_cast<double>(cells - 1) * streams;
  const double denom = a * std::tgamma(a);
  BoundConstants bc;
  bc.c1 = std::exp(-1.0) * std::pow(2.0, -a) / denom;
  bc.c2 = 2.0 * std::pow(2.0, -a) / denom;
  return bc;
}

bool check_lemma1(int cells, int streams, std::span<const double> grid) {
  const BoundConstants bc = lemma1_constants(cells, streams);
  const double a = static_cast<double>(cells - 1) * streams;
  constexpr double slack = 1e-12;
  for (double l : grid) {
    if (l < 0.0 || l >= 2.0) {
      throw DomainError("check_lemma1: grid values must be in [0, 2)");
    }
    const double f = lif_cdf(a, l);
    const double la = std::pow(l, a);
    if (bc.c1 * la > f + slack) return false;
    if (f > bc.c2 * la + slack) return false;
  }
  return true;
}

bool check_gamma_inequalities(double z, std::span<const double> grid) {
  if (z <= 0.0) throw DomainError("check_gamma_inequalities: need z > 0");
  constexpr double slack = 1e-12;
  for (double x : grid) {
    if (x < 0.0 || x >= 1.0) {
      throw DomainError("check_gamma_inequalities: grid values must be in [0, 1)");
    }
    const double g = lower_incomplete_gamma(z, x);
    const double xz = std::pow(x, z);
    if (xz * std::exp(-1.0) / z > g + slack) return false;
    if (g > 2.0 * xz / z + slack) return false;
  }
  return true;
}

double dof_upper_bound(int cells, int users, int antennas) {
  return static_cast<double>(cells) * users * antennas / (users + 1.0);
}

double estimate_p_oim(const std::vector<std::vector<double>>& trial_lif_sums,
                      double snr, double epsilon) {
  if (epsilon <= 0.0) throw DomainError("estimate_p_oim: epsilon must be > 0");
  if (trial_lif_sums.empty()) return 0.0;
  std::size_t confined = 0;
  for (const auto& cells : trial_lif_sums) {
    bool ok = true;
    for (double sum : cells) {
      if (sum * snr > epsilon) {
        ok = false;
        break;
      }
    }
    confined += ok ? 1 : 0;
  }
  return static_cast<double>(confined) / trial_lif_sums.size();
}

double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw DomainError("fit_loglog_slope: need at least 3 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw DomainError("fit_loglog_slope: points must be positive");
    }
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oim
