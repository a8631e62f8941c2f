#ifndef QWALK_RANDOM_HPP
#define QWALK_RANDOM_HPP

// Uniform doubles with a platform-independent bit pattern.
// std::uniform_real_distribution is implementation-defined, so it is avoided.

#include <cstdint>
#include <random>

namespace qwalk {

// Top 53 bits of a 64-bit word mapped to [0, 1).
inline double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline double uniform01(std::mt19937_64& rng) { return to_unit(rng()); }

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draw keyed by (seed, step, index): independent of call order,
// so trajectories can be moved concurrently.
inline double keyed_uniform01(std::uint64_t seed, std::uint64_t step, std::uint64_t index) {
  return to_unit(splitmix64(splitmix64(splitmix64(seed) ^ step) ^ index));
}

}  // namespace qwalk

#endif  // QWALK_RANDOM_HPP
