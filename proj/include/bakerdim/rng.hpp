#pragma once

#include <cstdint>

namespace bakerdim {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's public-domain constants).
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal (Box-Muller, cosine branch).
  double next_gaussian();

 private:
  uint64_t state_;
};

/// Generator keyed by (seed, stream, index). Sampling code addresses work
/// items by index so results are reproducible independent of scheduling.
inline SplitMix64 stream_rng(uint64_t seed, uint64_t stream, uint64_t index) {
  uint64_t h = mix64(seed);
  h = mix64(h ^ (0xA076'1D64'78BD'642Full + stream));
  h = mix64(h ^ (0xE703'7ED1'A0B4'28DBull + index));
  return SplitMix64(h);
}

// Stream ids; keep stable, they are part of the reproducibility contract.
inline constexpr uint64_t kStreamSample = 1;
inline constexpr uint64_t kStreamOrbit = 2;
inline constexpr uint64_t kStreamEnsemble = 3;
inline constexpr uint64_t kStreamModulus = 4;
inline constexpr uint64_t kStreamSubsample = 5;
inline constexpr uint64_t kStreamCenters = 6;
inline constexpr uint64_t kStreamMisc = 7;

/// Fills out[0..n) with fair bits, 64 per drawn word.
void fill_fair_bits(SplitMix64& rng, uint8_t* out, int n);

}  // namespace bakerdim
