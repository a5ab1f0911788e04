#pragma once

// Random number streams.
//
// Seeding rule: stream `s` of master seed `seed` is a std::mt19937_64 whose
// 64-bit seed is splitmix64(seed + (s + 1) * 0x9E3779B97F4A7C15).  Chain i of
// a run uses stream i; auxiliary draws (GFF starts, bootstrap resampling) use
// streams >= 2^32.

#include <cstdint>
#include <random>

namespace tcyl {

/// One SplitMix64 output step applied to `x`.
std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::uint64_t kAuxStreamBase = std::uint64_t{1} << 32;

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(stream_seed(seed, stream)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tcyl
