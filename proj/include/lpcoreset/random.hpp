#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lpcoreset {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds from a parent.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for a path of tags below `parent`, e.g. derive_seed(s, {grid, trial}).
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(parent);
  for (std::uint64_t tag : path) s = mix_seed(s ^ mix_seed(tag + 0x632be59bd9b4e019ULL));
  return s;
}

}  // namespace lpcoreset
