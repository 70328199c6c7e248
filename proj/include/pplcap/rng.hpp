#pragma once

#include <cstdint>
#include <limits>

namespace pplcap {

/// SplitMix64: a 64-bit counter passed through a bijective finalizer.
/// Cheap to construct, so every vector can own its generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() { return finalize(state_ += 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t state_;
};

using RngStream = SplitMix64;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(RngStream& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

/// Independent generator for (seed, stream, index).
///
/// The three words are hashed into the starting counter, so the generator
/// for a given index never depends on how work was scheduled.
inline RngStream make_substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = SplitMix64(seed)();
  h = SplitMix64(h ^ stream)();
  h = SplitMix64(h ^ index)();
  return RngStream{h};
}

/// Default seed; the PPLCAP_SEED environment variable overrides it in the CLI.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

}  // namespace pplcap
