#pragma once

#include <cstdint>
#include <random>

namespace gct {

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based derivation: the seed of stream `stream`, item `index` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return mix64(mix64(master ^ mix64(stream)) + index);
}

// Named streams so unrelated consumers never share generator state.
enum class SeedStream : std::uint64_t { Split = 1, ProbeDraw = 2, Dissimilar = 3, Synth = 4, Trial = 5 };

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

using Rng = std::mt19937_64;

/// Uniform double in [0,1) from the top 53 bits; identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n). Multiply-shift, portable.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Fisher-Yates with uniform_index, so shuffles do not depend on the library.
template <class It>
void portable_shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) std::swap(first[i - 1], first[uniform_index(rng, i)]);
}

}  // namespace gct
