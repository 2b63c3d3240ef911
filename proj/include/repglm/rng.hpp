#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace repglm {

// SplitMix64: a tiny counter-based generator (Steele, Lea & Flood's mixer,
// the one java.util.SplittableRandom and the reference xoshiro seeding use).
// Each next() advances a Weyl sequence and scrambles it, so a stream is fully
// determined by its 64-bit state and jumping to an arbitrary stream is one
// multiply.  That makes per-row / per-replication streams cheap: derive the
// state from (seed, tag, index) and every row can be generated independently
// of every other row, in any order, on any number of threads.
struct SplitMix64 {
  using result_type = std::uint64_t;

  std::uint64_t state = 0;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

namespace rng {

// One round of the SplitMix64 output function, used to fold words together.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream from a base seed and up to three tags
// (module tag, row/replication index, ...).  Streams with different inputs
// are decorrelated by the mixer.
inline SplitMix64 stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
  std::uint64_t s = mix(seed);
  s = mix(s ^ a);
  s = mix(s ^ b);
  s = mix(s ^ c);
  return SplitMix64{s};
}

// Compact tag for labelling streams by purpose ("cov", "resp", ...).
constexpr std::uint64_t tag(const char* s) {
  std::uint64_t v = 1469598103934665603ULL;  // FNV-1a
  for (; *s; ++s) v = (v ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
  return v;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, n) by rejection; pinned here (rather than
// std::uniform_int_distribution) so the mapping from stream to values is
// identical on every platform.
inline std::uint64_t bounded(SplitMix64& g, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = SplitMix64::max() - SplitMix64::max() % n;
  std::uint64_t v;
  do {
    v = g();
  } while (v >= limit);
  return v % n;
}

// Fisher-Yates shuffle driven by `bounded`, for the same portability reason.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& g) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded(g, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace rng
}  // namespace repglm
