#pragma once

#include <cstdint>
#include <random>

namespace lotr {

// Every random draw in the simulator goes through an explicit Rng instance.
using Rng = std::mt19937_64;

// splitmix64 finalizer; full 64-bit avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of stream `index` under `master`. Trial i of an experiment uses derive_seed(master, i).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace lotr
