#include "mfsim/rng.hpp"

#include <cmath>

namespace mfsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    word = splitmix64(s);
  }
}

Rng Rng::from_words(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = a;
  std::uint64_t mixed = splitmix64(s);
  s ^= b * 0x9E3779B97F4A7C15ULL;
  mixed ^= splitmix64(s);
  s ^= c * 0xC2B2AE3D27D4EB4FULL;
  mixed ^= splitmix64(s);
  return Rng(mixed);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  return 1.0 - uniform();
}

bool Rng::bernoulli(double p) {
  return uniform() < p;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Lemire's multiply-shift; the modulo bias is < 2^-64 * n, irrelevant at
  // the n used here, and the draw count stays fixed.
  const unsigned __int128 wide = static_cast<unsigned __int128>((*this)()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

std::pair<double, double> Rng::normal_pair() {
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  return {u * f, v * f};
}

}  // namespace mfsim
