#include "mfsim/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfsim {

void require_even_length(int length) {
  if (length < 2 || length % 2 != 0) {
    throw std::invalid_argument("lattice length must be even and >= 2, got " +
                                std::to_string(length));
  }
}

namespace {

// Circuit evolution demands an even lattice; the holders themselves only
// need a positive length (measurement updates are size-agnostic).
void require_positive_length(int length) {
  if (length < 1) {
    throw std::invalid_argument("length must be positive, got " + std::to_string(length));
  }
}

void require_site(int length, int site) {
  if (site < 0 || site >= length) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside lattice of length " +
                                std::to_string(length));
  }
}

}  // namespace

Amplitudes Amplitudes::delta(int length, int site) {
  require_positive_length(length);
  require_site(length, site);
  Amplitudes state;
  state.values.assign(static_cast<std::size_t>(length), Complex{0.0, 0.0});
  state.values[static_cast<std::size_t>(site)] = Complex{1.0, 0.0};
  return state;
}

Amplitudes Amplitudes::uniform(int length) {
  require_positive_length(length);
  Amplitudes state;
  state.values.assign(static_cast<std::size_t>(length),
                      Complex{1.0 / std::sqrt(static_cast<double>(length)), 0.0});
  return state;
}

double Amplitudes::norm_squared() const {
  double sum = 0.0;
  for (const Complex& c : values) {
    sum += std::norm(c);
  }
  return sum;
}

void Amplitudes::normalize() {
  const double n2 = norm_squared();
  if (n2 <= 0.0) {
    throw std::runtime_error("cannot normalize a zero state");
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& c : values) {
    c *= inv;
  }
}

ProbabilityVector ProbabilityVector::delta(int length, int site) {
  require_positive_length(length);
  require_site(length, site);
  ProbabilityVector dist;
  dist.values.assign(static_cast<std::size_t>(length), 0.0);
  dist.values[static_cast<std::size_t>(site)] = 1.0;
  return dist;
}

ProbabilityVector ProbabilityVector::uniform(int length) {
  require_positive_length(length);
  ProbabilityVector dist;
  dist.values.assign(static_cast<std::size_t>(length), 1.0 / static_cast<double>(length));
  return dist;
}

double ProbabilityVector::total_mass() const {
  double sum = 0.0;
  for (double p : values) {
    sum += p;
  }
  return sum;
}

void ProbabilityVector::renormalize() {
  const double mass = total_mass();
  if (mass <= 0.0) {
    throw std::runtime_error("cannot renormalize a zero distribution");
  }
  const double inv = 1.0 / mass;
  for (double& p : values) {
    p *= inv;
  }
}

ProbabilityVector probabilities(const Amplitudes& state) {
  ProbabilityVector dist;
  dist.values.reserve(state.values.size());
  for (const Complex& c : state.values) {
    dist.values.push_back(std::norm(c));
  }
  return dist;
}

}  // namespace mfsim
