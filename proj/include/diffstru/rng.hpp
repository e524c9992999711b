#pragma once

#include <cstdint>
#include <random>

namespace diffstru {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic substream derivation: every random field row / block gets its
// own engine keyed by (seed, tag, a, b), so parallel loops reproduce the
// serial result regardless of thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ tag);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

inline Rng substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                     std::uint64_t b = 0) {
  return Rng(mix_seed(seed, tag, a, b));
}

// Fixed tags for the sampler's random fields.
namespace stream {
constexpr std::uint64_t kInitX = 1;
constexpr std::uint64_t kInitY = 2;
constexpr std::uint64_t kInitU = 3;
constexpr std::uint64_t kInitR = 4;
constexpr std::uint64_t kInitLambda = 5;
constexpr std::uint64_t kInitMuXi = 6;
constexpr std::uint64_t kSampleR = 10;
constexpr std::uint64_t kSampleXi = 11;
constexpr std::uint64_t kSampleX = 12;
constexpr std::uint64_t kSampleU = 13;
constexpr std::uint64_t kSampleY = 14;
constexpr std::uint64_t kSampleLambda = 15;
constexpr std::uint64_t kSampleMuXi = 16;
constexpr std::uint64_t kGenerate = 20;
constexpr std::uint64_t kCascade = 21;
constexpr std::uint64_t kMissing = 22;
constexpr std::uint64_t kGraph = 23;
}  // namespace stream

}  // namespace diffstru
