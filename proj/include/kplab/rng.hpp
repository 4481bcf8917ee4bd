#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace kplab {

namespace detail {

// splitmix64 output function (Steele, Lea, Sebastiano Vigna's reference).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// Counter-based generator: every draw is a pure function of
// (seed, counter, slot).  Streams can be evaluated in any order, in
// parallel, and always replay bit-identically for a fixed seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed)
      : key_(detail::mix64(seed + detail::kGamma)) {}

  std::uint64_t bits(std::uint64_t counter, std::uint64_t slot = 0) const {
    const std::uint64_t h = detail::mix64(key_ + (counter + 1) * detail::kGamma);
    return detail::mix64(h + (slot + 1) * detail::kGamma);
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform(std::uint64_t counter, std::uint64_t slot = 0) const {
    return (static_cast<double>(bits(counter, slot) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes slots 2*pair and 2*pair+1.
  double normal(std::uint64_t counter, std::uint64_t pair = 0) const {
    const double u1 = uniform(counter, 2 * pair);
    const double u2 = uniform(counter, 2 * pair + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform index in [0, n).
  std::uint64_t index(std::uint64_t counter, std::uint64_t n,
                      std::uint64_t slot = 0) const {
    return bits(counter, slot) % n;
  }

 private:
  std::uint64_t key_;
};

// Deterministic sub-seed derivation for independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return detail::mix64(detail::mix64(master + detail::kGamma) +
                       (index + 1) * detail::kGamma);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : label) {
    h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  }
  return derive_seed(derive_seed(master, h), index);
}

}  // namespace kplab
