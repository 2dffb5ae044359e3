#pragma once

#include <cstdint>
#include <random>

namespace vpd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Combines a base seed with stream identifiers into an independent sub-seed.
/// Used to give every episode / cell / structural event its own RNG stream so
/// runs stay reproducible regardless of how work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t k = 0) {
  return splitmix64(splitmix64(base ^ splitmix64(stream)) + k);
}

/// Deterministic RNG. Uniform doubles are generated from raw mt19937_64
/// output (not std::uniform_real_distribution, whose mapping is
/// implementation-defined) so that runs are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

// Stream tags for derive_seed.
inline constexpr std::uint64_t kStreamEpisode = 0xE01;
inline constexpr std::uint64_t kStreamInit = 0xE02;
inline constexpr std::uint64_t kStreamTrain = 0xE03;
inline constexpr std::uint64_t kStreamEval = 0xE04;
inline constexpr std::uint64_t kStreamSplit = 0xE05;

}  // namespace vpd
