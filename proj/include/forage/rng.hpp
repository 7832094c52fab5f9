#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace forage {

/// Independent random streams. Every draw in the engine comes from a stream
/// keyed by (seed, stream, step, slot), so the values a slot sees never depend
/// on evaluation order or worker count.
enum class Stream : std::uint64_t {
  agent_placement = 1,
  resource_placement = 2,
  policy_init = 3,
  mutation = 4,
  evolution_strategy = 5,
  test = 99,
};

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output i is a hash of (key, i). Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t step, std::uint64_t slot)
      : key_(derive_key(seed, stream, step, slot)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ ^ splitmix64(counter_++)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream,
                                            std::uint64_t step, std::uint64_t slot) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ static_cast<std::uint64_t>(stream));
    k = splitmix64(k ^ step);
    k = splitmix64(k ^ slot);
    return k;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace forage
