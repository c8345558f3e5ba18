#pragma once

#include <cstdint>

namespace veriledger {

/// SplitMix64 (Steele, Lea, Flood 2014; constants as in Vigna's reference):
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Explicit 64-bit state, identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform integer in [0, bound) by rejection of the biased low range.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0,1) from the top 53 bits.
  double unit();

  std::uint8_t byte() { return static_cast<std::uint8_t>(next() >> 56); }

  /// Independent stream derived from this generator's seed and a label.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t label);

 private:
  std::uint64_t state_;
};

}  // namespace veriledger
