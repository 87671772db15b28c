#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace displab {

/// Counter-based deterministic randomness.  Every drawn value is a pure
/// function of (seed, stream, counter), so results are bit-identical across
/// runs, platforms and thread counts -- the reproducibility contract of the
/// experiment harness.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t stream)
      : state_(splitmix64(seed ^ splitmix64(stream ^ 0xa5a5a5a5a5a5a5a5ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(state_ ^ splitmix64(counter));
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  /// Standard complex Gaussian (unit variance per component), Box-Muller.
  std::complex<double> gaussian(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  /// Unit-modulus complex number with uniform phase.
  std::complex<double> phase(std::uint64_t counter) const {
    const double a = 2.0 * M_PI * uniform(counter);
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace displab
