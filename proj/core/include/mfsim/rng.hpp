#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace mfsim {

/// splitmix64 step; advances the state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ generator with splitmix64 seeding.
///
/// Satisfies UniformRandomBitGenerator, but all sampling used in the
/// simulators goes through the explicit member functions below so that
/// the draw sequence is fixed by this code alone, not by the standard
/// library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Seed from several words (mixed through splitmix64 in sequence).
  static Rng from_words(std::uint64_t a, std::uint64_t b, std::uint64_t c);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform double in (0, 1]; safe as a log argument.
  double uniform_pos();

  bool bernoulli(double p);

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

  /// Two independent standard normal deviates (Marsaglia polar method).
  std::pair<double, double> normal_pair();

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace mfsim
