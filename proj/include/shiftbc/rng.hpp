#pragma once

#include <cstdint>

namespace shiftbc {

// Counter-based random number generation.  Every uniform consumed anywhere in
// the project is addressed as (seed, stream, tag, counter), so a value can be
// regenerated at any time without storing the sequence.  This is what makes
// trajectories over iid models randomly accessible at O(1) memory and makes
// every run reproducible independent of evaluation order or thread count.
//
// The mixer is the SplitMix64 finalizer; counter-indexed access into a
// SplitMix64 stream is exact (the generator itself is mix(state0 + i*GAMMA)).

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

namespace rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Substream tags keep the uniforms used for different purposes within one
// (seed, stream) pair disjoint.
enum class Tag : std::uint64_t {
  iid_symbol = 1,
  chain_init = 2,
  chain_forward = 3,
  chain_backward = 4,
  gauss_digit = 5,
  target = 6,  // target sequences use tag+target_index, see derive_key
};

inline std::uint64_t derive_key(RngSeed s, Tag tag, std::uint64_t sub = 0) {
  std::uint64_t h = mix64(s.seed);
  h = mix64(h ^ (static_cast<std::uint64_t>(s.stream) + 0x632BE59BD9B4E019ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) * 0x9E6C63D0876A9A47ULL + sub));
  return h;
}

inline std::uint64_t bits_at(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + counter * kGamma);
}

// Uniform in [0, 1), 53-bit resolution.
inline double u01_at(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(bits_at(key, counter) >> 11) * 0x1.0p-53;
}

// Coordinates are signed; fold them into the counter space bijectively.
inline std::uint64_t coord_counter(std::int64_t coord) {
  return static_cast<std::uint64_t>(coord) * 2ULL + (coord < 0 ? 1ULL : 0ULL);
}

}  // namespace rng
}  // namespace shiftbc
