#pragma once

#include <cstdint>
#include <random>

namespace wecfarm {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline double normal(Rng& rng, double sigma) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}
// Uniform integer in [0, n).
inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace wecfarm
