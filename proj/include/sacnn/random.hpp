#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace sacnn {

/// Seeded random stream with distributions that are identical on every
/// standard library (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed = 40) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit)
      x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  template <class It> void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i)
      std::swap(first[i - 1], first[uniform_index(i)]);
  }

  bool operator==(const Rng &) const = default;

private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a. Stable across platforms and runs; used for cache keys.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t hash = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

} // namespace sacnn
