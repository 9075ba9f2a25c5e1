#pragma once

#include <cstdint>
#include <random>

namespace strategem {

/// SplitMix64 finalizer. Used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of run `index` in a batch. Depends only on (base_seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

/// Per-run random stream. mt19937_64's output sequence is fixed by the
/// standard, and the real/integer mappings below avoid the
/// implementation-defined std distributions, so streams are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Multiplicative noise factor in [1 - eps, 1 + eps]. Draws nothing when eps == 0.
  double noise(double eps) { return eps > 0.0 ? uniform(1.0 - eps, 1.0 + eps) : 1.0; }

  /// Uniform integer in [0, n), n >= 1 (Lemire rejection).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = (0 - n) % n;
    for (;;) {
      const auto x = engine_();
      const auto m = static_cast<unsigned __int128>(x) * n;
      if (static_cast<std::uint64_t>(m) >= limit) return static_cast<std::uint64_t>(m >> 64);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace strategem
