#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace smc {

// SplitMix64 finalizer, used for seed mixing and stream derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Child stream `stream` of `base_seed`. Anything that fans one seed out to
// several consumers (parallel realizations, the draw vs. the anneal chain)
// derives per-consumer seeds through this rule.
constexpr std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t stream) noexcept {
  return splitmix64(base_seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

// Seedable generator with fully specified output: mt19937_64 raw words,
// uniforms from the top 53 bits, normals via Box-Muller. Identical seeds
// produce identical streams, so every seeded operation is replayable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform index in [0, n), unbiased via rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    for (;;) {
      const std::uint64_t x = engine_();
      const std::uint64_t r = x % bound;
      if (x - r <= std::numeric_limits<std::uint64_t>::max() - (bound - 1)) {
        return static_cast<std::size_t>(r);
      }
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smc
