#pragma once

#include <cstdint>
#include <random>

namespace distauto {

/// Uniform integer in [0, bound) by rejection; unlike
/// std::uniform_int_distribution the sequence is identical on every stdlib.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

}  // namespace distauto
