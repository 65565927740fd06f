#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace qthermo {

/// Seedable, splittable pseudo-random stream (xoshiro256++ core, splitmix64
/// seeding). Streams derived via derive() are statistically independent, so
/// parallel Monte-Carlo workers can be driven reproducibly from one root seed.
/// Instances must not be shared between workers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent child stream; deterministic in (parent seed, index).
  /// Does not consume parent state.
  RandomStream derive(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform in (0, 1].
  double uniform();

  /// Standard normal via Box-Muller (pairs cached).
  double gaussian();

  /// Standard complex normal: variance 1/2 per component.
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> state_{};
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace qthermo
