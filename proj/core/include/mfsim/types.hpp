#pragma once

#include <complex>
#include <vector>

namespace mfsim {

using Complex = std::complex<double>;

enum class Boundary { OBC, PBC };

/// Site index of the initial position i = L/2 (sites are 0-based in code,
/// 1..L in the usual physics labelling).
inline int center_site(int length) { return length / 2 - 1; }

/// Single-particle wave function on a 1D lattice: L complex amplitudes
/// with unit norm. L must be even and >= 2.
struct Amplitudes {
  std::vector<Complex> values;

  int length() const { return static_cast<int>(values.size()); }

  static Amplitudes delta(int length, int site);
  static Amplitudes uniform(int length);

  double norm_squared() const;
  /// Rescale to unit norm; throws std::runtime_error on a zero vector.
  void normalize();
};

/// Occupation probabilities: L nonnegative reals summing to 1.
struct ProbabilityVector {
  std::vector<double> values;

  int length() const { return static_cast<int>(values.size()); }

  static ProbabilityVector delta(int length, int site);
  static ProbabilityVector uniform(int length);

  double total_mass() const;
  /// Rescale to unit mass; throws std::runtime_error on zero mass.
  void renormalize();
};

/// |c_i|^2 of a quantum state.
ProbabilityVector probabilities(const Amplitudes& state);

void require_even_length(int length);

}  // namespace mfsim
