#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pacsafe {

using Rng = std::mt19937_64;

/// Stable sub-seed for a labeled consumer (a table row, the learner, a Monte
/// Carlo shard). Independent of call order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = master ^ h;  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pacsafe
