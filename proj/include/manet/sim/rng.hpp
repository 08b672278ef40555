#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace manet::sim {

/// Seeded pseudo-random stream. The engine (mt19937_64) and the conversions
/// below are fully specified, so a seed yields the same sequence everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  /// Independent substream keyed by a fixed label, e.g. "mobility" or "mac".
  static RngStream derive(std::uint64_t base_seed, std::string_view label);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace manet::sim
