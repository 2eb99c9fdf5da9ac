#pragma once

// Counter-based pseudo random generator.
//
// CounterRng is SplitMix64 used in counter mode: the i-th output of stream s
// under seed k is mix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15), where mix64
// is the SplitMix64 finalizer. Any output can be computed without the ones
// before it, so independent streams (one per batch, chain or trial) never
// overlap and never depend on scheduling.

#include <cstdint>
#include <limits>

namespace loggas {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64_mix(seed ^ 0x6A09E667F3BCC909ULL) ^
             splitmix64_mix(stream + 0x3C6EF372FE94F82BULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return splitmix64_mix(key_ + (++counter_) * kGamma); }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace loggas
