#pragma once

// Seeded, platform-independent random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Variates are derived here rather than through <random>
// distributions, whose algorithms differ between standard libraries:
//   uniform01   (k + 0.5) / 2^53 with k the top 53 bits of one draw, in (0, 1)
//   gaussian    Box-Muller on two uniform01 draws, both outputs used in turn
//   below(n)    rejection sampling on the top bits, unbiased
//
// Sub-streams: derive_seed(seed, stream) = splitmix64(seed ^ splitmix64(stream)).
// Each generated object (matrix, signal, selection, noise, trial) takes its
// own stream id so that adding draws to one object never shifts another.
// Changing any of the above changes every reproduced experiment.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

namespace unlabeled {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  double uniform01() {
    const auto k = static_cast<double>(engine_() >> 11);
    return (k + 0.5) * 0x1.0p-53;
  }

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n); n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace unlabeled
