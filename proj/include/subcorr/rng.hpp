#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace subcorr {

/// Deterministic Gaussian sampler used everywhere randomness is needed.
///
/// The algorithm is fixed so that a seed pins the whole stream:
///  - raw 64-bit words come from std::mt19937_64 (fully specified by the
///    standard),
///  - uniforms in (0,1] are built as ((word >> 11) + 1) * 2^-53,
///  - normals via the Box-Muller transform, consuming two uniforms and
///    caching the second variate.
///
/// std::normal_distribution is avoided on purpose: its output sequence is
/// implementation-defined, which would break seed reproducibility.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform double in (0, 1].
  double uniform() {
    return static_cast<double>((raw() >> 11) + 1) * 0x1p-53;
  }

  /// Standard normal variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return raw() % n; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace subcorr
