#pragma once

#include <cstdint>
#include <random>

namespace bnmap {

/// SplitMix64 finalizer. Used to derive independent seeds for named streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Seeded 64-bit generator (mt19937_64) with portable integer/real mappings.
///
/// The standard distributions are implementation-defined, so draws go through
/// `uniform()` (53-bit mantissa) and `below()` (rejection sampling) to keep
/// results bit-identical across standard libraries. Independent streams for
/// a single seed are obtained with `Rng::stream(seed, k)`.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0x5eedULL)) {}

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(mix_seed(seed, stream_id));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bnmap
