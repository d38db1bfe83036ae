#pragma once

#include <cstdint>
#include <string_view>

namespace parle {

// SplitMix64 (Steele, Lea & Flood). Splittable, counter-style generator:
// the state advances by a fixed odd increment and the output is a bijective
// mix of the state. All randomness in this library flows through it so that
// any run is reproducible from a single 64-bit seed, independently of
// platform and of the order in which tasks are evaluated.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound). Rejection keeps the distribution exact.
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fair coin: exactly probability 1/2.
  bool coin() { return (next() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a, used to fold string tags into seed derivations.
inline std::uint64_t hash64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives an independent child seed from (seed, a, b, c). Tasks seeded this
// way may run in any order, or concurrently, without affecting results.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = seed;
  h = detail::mix64(h ^ (a + 0x9e3779b97f4a7c15ull));
  h = detail::mix64(h ^ (b + 0xbf58476d1ce4e5b9ull));
  h = detail::mix64(h ^ (c + 0x94d049bb133111ebull));
  return h;
}

}  // namespace parle
