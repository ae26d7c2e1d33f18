#pragma once

#include <cstdint>

namespace psi {

inline constexpr const char* kCounterRngName = "splitmix64-counter";

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: word (a, b) of stream `seed`. Streams for distinct
/// (seed, a, b) triples are independent for practical purposes.
constexpr std::uint64_t counter_word(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

/// Uniform in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t w) { return static_cast<double>(w >> 11) * 0x1.0p-53; }

}  // namespace psi
