#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace owl {

/// SplitMix64 run in counter mode.
///
/// Every output is a pure function of (seed, stream, counter): the k-th draw
/// is mix(key + (k + 1) * 0x9E3779B97F4A7C15) with key derived from seed and
/// stream, mix being the SplitMix64 finalizer. Streams with different ids are
/// independent, so the design, the signal and the noise can each be varied
/// on their own. Satisfies UniformRandomBitGenerator for use with
/// <random> algorithms.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  result_type at(std::uint64_t counter) const noexcept;
  /// Uniform in the open interval (0, 1).
  double uniform_at(std::uint64_t counter) const noexcept;
  /// Standard normal via Box-Muller on draws 2k and 2k+1 (cosine branch).
  double normal_at(std::uint64_t counter) const noexcept;

  result_type operator()() noexcept { return at(next_++); }
  double uniform() noexcept { return uniform_at(next_++); }
  double normal() noexcept { return normal_at(next_++); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t key_;
  std::uint64_t next_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// Deterministic child seed from a base seed and a path of indices, e.g.
/// (base, cell, trial).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// Stream ids used by the data generators.
namespace streams {
inline constexpr std::uint64_t kDesign = 1;
inline constexpr std::uint64_t kSignal = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kSolver = 4;
}  // namespace streams

}  // namespace owl
