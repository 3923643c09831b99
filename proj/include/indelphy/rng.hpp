#pragma once

#include <cmath>
#include <cstdint>

namespace indelphy {

inline constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Splittable deterministic generator (xoshiro256++ seeded from a splitmix64
// chain over (seed, stream_id)). Identical (seed, stream_id) reproduces an
// identical draw sequence on every platform.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id) {
    uint64_t z = seed ^ mix64(stream_id ^ 0x6a09e667f3bcc909ULL);
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      s = mix64(z);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1]; never 0, so std::log of it is finite.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Number of failures before the first success at rate p (p in (0, 1]).
  // For p == 1 this is always 0.
  uint64_t geometric(double log1p_neg_p) {
    double g = std::floor(std::log(uniform_pos()) / log1p_neg_p);
    if (g > 9.2e18) return UINT64_MAX;
    return static_cast<uint64_t>(g);
  }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    // Lemire-style rejection-free enough for non-adversarial n.
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    return static_cast<uint64_t>(m >> 64);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace indelphy
