#pragma once

#include <cstdint>
#include <random>

namespace dtcns {

using Rng = std::mt19937_64;

/// Independent random streams, one per simulation concern, all derived from a
/// single master seed. Changing the number of draws in one phase never shifts
/// the draws of another.
enum class Stream : std::uint32_t {
  Features = 1,
  ScoreNoise = 2,
  Epidemic = 3,
  Exploration = 4,
  Encounter = 5,
  Ignorant = 6,
  Replay = 7,
  Init = 8,
  Placement = 9,
};

inline Rng make_stream(std::uint64_t master_seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e3779b9u};
  return Rng(seq);
}

/// Seed for episode `index` of a run seeded with `run_seed`.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace dtcns
