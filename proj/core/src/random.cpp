#include "mvlabel/random.hpp"

#include <cmath>

namespace mvlabel {

std::size_t SplitMix64::below(std::size_t n) noexcept {
  // Reject the low 2^64 mod n values so the modulo is unbiased.
  const std::uint64_t range = n;
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x >= threshold) return static_cast<std::size_t>(x % range);
  }
}

double SplitMix64::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t SplitMix64::derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 mixer(seed ^ (stream * 0xD1B54A32D192ED03ULL));
  mixer();
  return mixer();
}

}  // namespace mvlabel
