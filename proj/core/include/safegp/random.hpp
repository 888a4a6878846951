#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace safegp {

using Engine = std::mt19937_64;

/// 64-bit FNV-1a hash of a purpose label.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent sub-seed from (seed, purpose, i, j).
///
/// Every random consumer in the library names its purpose and indices, so a
/// stream never depends on how many draws other consumers made before it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                                    std::uint64_t i = 0, std::uint64_t j = 0) noexcept {
  std::uint64_t h = mix64(seed ^ label_hash(purpose));
  h = mix64(h ^ mix64(i));
  h = mix64(h ^ mix64(j + 0x632be59bd9b4e019ULL));
  return h;
}

inline Engine make_engine(std::uint64_t seed, std::string_view purpose,
                          std::uint64_t i = 0, std::uint64_t j = 0) {
  return Engine(derive_seed(seed, purpose, i, j));
}

}  // namespace safegp
