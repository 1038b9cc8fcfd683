#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace pinnlab {

// All randomness uses std::mt19937_64, whose output sequence is fixed by
// the C++ standard. The distributions below are written out by hand
// because the std:: distributions are implementation-defined.

inline constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;

/// Uniform on [0, 1) with 53 random bits.
inline double unit_halfopen(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * kTwoPowMinus53; }

/// Uniform on (0, 1): the 53-bit grid shifted by half a step.
inline double unit_open(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * kTwoPowMinus53;
}

/// Unbiased integer on [0, n) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t r;
  do {
    r = gen();
  } while (r >= limit);
  return r % n;
}

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle(std::span<T> items, std::mt19937_64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(gen, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace pinnlab
