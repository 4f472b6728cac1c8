#pragma once

#include <cstdint>

namespace treedet {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1) that depends only on its four keys.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial,
                              std::uint64_t node) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ trial);
  h = mix64(h ^ node);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace treedet
