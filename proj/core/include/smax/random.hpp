#pragma once

#include <cstdint>
#include <random>

namespace smax {

// 53-bit uniform draw strictly inside (0,1), so log(u) and log(-log(u))
// stay finite. Bypasses std::uniform_real_distribution to keep sampled
// streams identical across standard library implementations.
inline double uniform01_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01_open(rng);
}

}  // namespace smax
