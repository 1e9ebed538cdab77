#include "owl/rng.hpp"

#include <cmath>
#include <numbers>

namespace owl {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64_mix(seed ^ splitmix64_mix(stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

CounterRng::result_type CounterRng::at(std::uint64_t counter) const noexcept {
  return splitmix64_mix(key_ + (counter + 1) * kGolden);
}

double CounterRng::uniform_at(std::uint64_t counter) const noexcept {
  return (static_cast<double>(at(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal_at(std::uint64_t counter) const noexcept {
  const double u1 = uniform_at(2 * counter);
  const double u2 = uniform_at(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64_mix(base + kGolden);
  for (std::uint64_t idx : path) {
    h = splitmix64_mix(h ^ splitmix64_mix(idx + kGolden));
  }
  return h;
}

}  // namespace owl
