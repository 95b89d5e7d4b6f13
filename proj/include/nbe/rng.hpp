#pragma once

#include <cstdint>

namespace nbe {

// SplitMix64. Self-contained so sampled streams are bit-identical across
// platforms and standard library versions (std::uniform_* is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., bound-1}; bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    return next_u64() % bound;
  }

  // Derive an independent stream, e.g. one per task point.
  Rng fork(std::uint64_t salt) const {
    Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nbe
