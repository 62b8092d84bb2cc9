#pragma once

#include <cstdint>

namespace tailrisk {

/// SplitMix64 used as a counter-based generator: draw k is a pure function of
/// (seed, k), so streams are reproducible across platforms and languages.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(seed ^ mix(stream + 0x632be59bd9b4e019ULL)) {}

  std::uint64_t next_u64() noexcept { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform on (0,1), 53-bit resolution; never returns 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace tailrisk
