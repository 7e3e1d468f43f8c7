#ifndef GAUSSFIT_RANDOM_HPP
#define GAUSSFIT_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gaussfit {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a) ^ b);
}

constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix64(hash64(a, b) ^ c);
}

/// Counter-based random stream: element i is a pure function of (seed, i),
/// so any element can be drawn independently of the others and the sequence
/// is identical on every platform with IEEE doubles.
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + counter * 0xd1342543de82ef95ULL);
  }

  /// Uniform variate in (0, 1].
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform variate in [lo, hi).
  constexpr double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
    return lo + (hi - lo) * (uniform(counter) - 0x1.0p-53);
  }

  /// Standard normal variate via Box-Muller; indices 2j and 2j+1 share a
  /// uniform pair and take the cosine and sine branches respectively.
  double normal(std::uint64_t index) const {
    const std::uint64_t pair = index / 2;
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
  }

 private:
  std::uint64_t key_;
};

}  // namespace gaussfit

#endif  // GAUSSFIT_RANDOM_HPP
