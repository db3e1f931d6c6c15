#pragma once

// Portable, seedable random streams. Every random draw in the library comes
// from here so that outputs are bit-identical across platforms and standard
// library implementations.
//
//   splitmix64     seeding and key mixing (Steele, Lea & Flood)
//   xoshiro256**   stream generator (Blackman & Vigna)
//
// A stream is identified by (seed, side, index); see derive_stream_key().

#include <cstdint>
#include <utility>

namespace matchkit::rng {

inline constexpr const char* kGeneratorId = "xoshiro256starstar+splitmix64-streams/v1";

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept { return splitmix64_next(x); }

class Xoshiro256ss {
 public:
  explicit constexpr Xoshiro256ss(std::uint64_t seed) noexcept {
    for (auto& word : s_) word = splitmix64_next(seed);
  }

  constexpr std::uint64_t operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0, 1) with 53 bits of precision.
  constexpr double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound), bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4]{};
};

// Key of stream `index` on `side` (0 = men, 1 = women) for a given seed.
inline constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t side, std::uint64_t index) noexcept {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ (0x5851F42D4C957F2DULL * (side + 1)));
  k = mix64(k ^ (0xD6E8FEB86659FD93ULL * (index + 1)));
  return k;
}

inline Xoshiro256ss stream(std::uint64_t seed, std::uint64_t side, std::uint64_t index) noexcept {
  return Xoshiro256ss(derive_stream_key(seed, side, index));
}

}  // namespace matchkit::rng
