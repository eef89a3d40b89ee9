#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mfsim/rng.hpp"
#include "mfsim/schedule.hpp"
#include "mfsim/types.hpp"

namespace mfsim::qdyn {

/// 2x2 unitary acting on the amplitude pair of a bond, column convention
/// (c_left, c_right)^T.
struct TwoSiteUnitary {
  Complex u00, u01, u10, u11;

  void apply(Complex& top, Complex& bottom) const {
    const Complex a = top;
    const Complex b = bottom;
    top = u00 * a + u01 * b;
    bottom = u10 * a + u11 * b;
  }

  /// Max entrywise deviation of U†U from the identity.
  double unitarity_error() const;
};

/// Haar-distributed element of U(2): QR of a complex Ginibre matrix with
/// the R diagonal fixed real positive.
TwoSiteUnitary sample_haar_unitary(Rng& rng);

/// The constant gate (1/sqrt(2)) [[1, 1], [-1, 1]].
TwoSiteUnitary fixed_gate();

enum class SchemeKind { Projective, Generalized, NoClick };

/// Occupation-number measurement at a single site. Projective collapses
/// onto or off the site; Generalized mixes the two Kraus branches with an
/// error rate e in [0,1] (e=0 projective, e=1 identity); NoClick applies
/// the no-detection projector unconditionally.
struct MeasurementScheme {
  SchemeKind kind = SchemeKind::Projective;
  double error_rate = 0.0;

  static MeasurementScheme projective() { return {SchemeKind::Projective, 0.0}; }
  static MeasurementScheme generalized(double e) { return {SchemeKind::Generalized, e}; }
  static MeasurementScheme no_click() { return {SchemeKind::NoClick, 0.0}; }

  friend bool operator==(const MeasurementScheme&, const MeasurementScheme&) = default;
};

/// Gates for one layer, keyed by the left site of each active bond.
using GateMap = std::map<int, TwoSiteUnitary>;

/// Applies one brick-wall unitary layer in place and renormalizes.
/// The gate map must cover exactly the bonds active at time t.
void apply_unitary_layer(Amplitudes& state, const GateMap& gates, long t,
                         const CircuitSchedule& schedule);

struct OutcomeProbabilities {
  double p0;
  double p1;
};

/// Born probabilities of outcomes 0/1 at `site`. Rejects NoClick.
OutcomeProbabilities outcome_probabilities(const Amplitudes& state, int site,
                                           const MeasurementScheme& scheme);

/// Applies the Kraus operator of `outcome` at `site` and renormalizes.
/// A projective detection collapses to the basis state with amplitude +1
/// (the physically irrelevant global phase is fixed to that gauge).
void apply_measurement(Amplitudes& state, int site, int outcome,
                       const MeasurementScheme& scheme);

struct MeasurementEvent {
  int site;
  int outcome;
};

/// Scans sites in ascending order, measuring each with probability `rate`.
/// Outcomes are drawn from the state as updated by earlier sites in the
/// same scan. For NoClick the no-detection operator is applied at every
/// selected site.
std::vector<MeasurementEvent> measurement_layer(Amplitudes& state, double rate,
                                                const MeasurementScheme& scheme, Rng& rng);

enum class GateKind { Haar, Fixed };

struct QuantumProtocol {
  int length = 0;
  long steps = 0;
  double rate = 0.0;
  MeasurementScheme scheme;
  GateKind gates = GateKind::Haar;
  Boundary boundary = Boundary::OBC;
};

using StepObserver = std::function<void(long t, const Amplitudes& state)>;

/// Runs a full trajectory from the centered delta state: T alternating
/// unitary and measurement layers, gates resampled per bond and per layer
/// in the Haar case. The observer, when set, is called after each step.
Amplitudes evolve_quantum_trajectory(const QuantumProtocol& protocol, Rng& rng,
                                     const StepObserver& observer = {});

}  // namespace mfsim::qdyn
