#pragma once

#include <cstdint>
#include <random>

namespace chaoslab {

/// splitmix64 step; used to derive independent streams from (seed, salt) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ splitmix64(salt * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t salt = 0) {
  return std::mt19937_64(mix_seed(seed, salt));
}

}  // namespace chaoslab
