#pragma once

#include <cstdint>
#include <random>

namespace fdens {

using Seed = std::uint64_t;
using Engine = std::mt19937_64;

/// Number of Monte Carlo draws handled by one substream. Parallel loops
/// assign whole chunks to workers, so results do not depend on the worker count.
inline constexpr std::uint64_t kChunkSize = 1u << 14;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Split function: substream `index` of `master` is seeded with
/// splitmix64(splitmix64(master) ^ splitmix64(index + 1)).
inline Seed substream_seed(Seed master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

inline Engine make_engine(Seed master, std::uint64_t index) {
  return Engine(substream_seed(master, index));
}

}  // namespace fdens
