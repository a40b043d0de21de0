#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace memcon {

// All randomness flows through this engine; outcomes are bit-identical for
// identical seeds on every platform because only raw 64-bit draws are used.
using Engine = std::mt19937_64;

inline constexpr std::string_view kEngineName = "mt19937_64";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct RngSpec {
  std::uint64_t master_seed = 0;

  std::uint64_t run_seed(std::uint64_t run_index) const { return splitmix64(master_seed + run_index); }
};

// Uniform integer in [0, bound) from the high 32 bits of one draw.
inline std::uint32_t uniform_below(std::uint64_t draw, std::uint32_t bound) {
  return static_cast<std::uint32_t>(((draw >> 32) * bound) >> 32);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace memcon
