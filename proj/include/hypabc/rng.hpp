#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace hypabc {

/// Seeded random stream. All draws are derived from raw 64-bit engine output
/// so that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the closed interval [0, 1].
  double uniform01() {
    constexpr double kScale = 1.0 / static_cast<double>((std::uint64_t{1} << 53) - 1);
    return static_cast<double>(engine_() >> 11) * kScale;
  }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  /// Uniform index in [0, n), n > 0. Rejection sampling keeps it unbiased.
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypabc
