#pragma once

#include <cstdint>

namespace mfsplateau {

/// Stateless counter-based generator: the k-th draw of stream `seed` is a
/// SplitMix64 hash of (seed, k). Draws can be taken in any order, so parallel
/// runs that each own a counter range stay reproducible.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const noexcept { return mix(mix(seed_) ^ counter); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Seed of an independent child stream, e.g. one per random-search sample.
  std::uint64_t child_seed(std::uint64_t index) const noexcept { return mix(bits(index) ^ 0xD1B54A32D192ED03ULL); }

 private:
  std::uint64_t seed_;
};

}  // namespace mfsplateau
