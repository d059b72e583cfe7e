#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace okl {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent named stream from a root seed (FNV-1a on the name).
inline std::uint64_t sub_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(root ^ h);
}

inline std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root + splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace okl
