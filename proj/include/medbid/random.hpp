#pragma once

#include <cstdint>
#include <random>

namespace medbid {

/// All randomized code in the library draws through these helpers so that a
/// seed determines identical output on every platform.  (The distributions in
/// <random> are implementation-defined; mt19937_64 itself is not.)
inline std::mt19937_64 seeded_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

/// Uniform draw from [0, 1) with 53 random bits.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_double(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_double(rng);
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling; unbiased and platform-stable.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace medbid
