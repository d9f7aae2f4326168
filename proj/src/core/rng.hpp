#pragma once

#include <cstdint>

namespace mlink {

// Pinned portable generator: xoshiro256++ seeded through SplitMix64.
// Every randomized fixture in the project (link delays, losses, trace noise)
// goes through this generator so runs replay bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);

  uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller (cosine branch only, one value per pair
  // of uniforms, no cached state).
  double gaussian();

  // Exp(1) via inversion.
  double exponential();

 private:
  uint64_t s_[4];
};

uint64_t splitmix64(uint64_t& state);

}  // namespace mlink
