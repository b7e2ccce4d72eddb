#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace oim {

/// Deterministic splittable random stream built on SplitMix64.
///
/// Substreams are derived by hashing the parent state with up to three
/// indices, so a worker can reconstruct the stream for (grid point, trial,
/// attempt) without touching any shared state. Gaussian variates come from
/// Box-Muller on the raw uniforms, which keeps the byte stream identical
/// across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  /// New independent stream keyed by (a, b, c) relative to this one.
  [[nodiscard]] RandomStream derive(std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) const {
    std::uint64_t h = state_;
    h = mix(h ^ 0x9e3779b97f4a7c15ULL, a);
    h = mix(h, b);
    h = mix(h, c);
    return RandomStream(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal N(0, 1).
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u = next_unit();
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  /// Complex Gaussian with N(0, 1) real and imaginary parts.
  std::complex<double> next_cgaussian() {
    const double u = next_unit();
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  static std::uint64_t mix(std::uint64_t h, std::uint64_t k) {
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    h ^= k;
    h = (h << 27) | (h >> 37);
    return h * 5 + 0x52dce729ULL;
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace oim
