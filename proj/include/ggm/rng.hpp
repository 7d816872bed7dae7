#pragma once

#include <cstdint>
#include <random>

namespace ggm {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of `parent`. Streams with different
/// (tag, index) are decorrelated; the mapping is fixed across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag,
                                    std::uint64_t index = 0) {
  return mix64(mix64(parent ^ mix64(tag)) + index * 0xd1b54a32d192ed03ULL);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace ggm
