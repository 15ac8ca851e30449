#pragma once

#include <cstdint>

#include "kslab/rational.hpp"

namespace kslab {

// splitmix64: the fixed, documented generator used for every seeded
// simulation in this library. Bit-reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Uniform integer in [0, bound) for arbitrary-precision bounds,
// by rejection on the smallest covering power of two.
inline Integer uniform_below(SplitMix64& rng, const Integer& bound) {
  if (bound <= 1) return 0;
  unsigned bits = 0;
  for (Integer b = bound - 1; b > 0; b >>= 1) ++bits;
  for (;;) {
    Integer draw = 0;
    for (unsigned got = 0; got < bits; got += 64) {
      draw <<= 64;
      draw += rng.next();
    }
    draw &= (Integer(1) << bits) - 1;
    if (draw < bound) return draw;
  }
}

}  // namespace kslab
