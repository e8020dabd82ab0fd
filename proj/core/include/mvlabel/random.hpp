#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace mvlabel {

/// SplitMix64 generator. Fully specified arithmetic, so a given seed yields the
/// same stream on every platform and standard library. Satisfies
/// UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) noexcept;

  /// Standard normal draw (Marsaglia polar method).
  double normal() noexcept;

  /// Derives an independent child seed, e.g. one stream per view or replicate.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept;

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mvlabel
