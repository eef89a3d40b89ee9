#pragma once

#include <functional>
#include <map>

#include "mfsim/rng.hpp"
#include "mfsim/schedule.hpp"
#include "mfsim/types.hpp"

namespace mfsim::cdyn {

/// Symmetric two-site transition matrix [[s, 1-s], [1-s, s]]: the particle
/// stays with probability s, hops to the bond partner with 1-s. Columns
/// sum to one, so total mass is conserved up to rounding.
struct TransitionMatrix {
  double stay;

  void apply(double& left, double& right) const {
    const double a = left;
    const double b = right;
    left = stay * a + (1.0 - stay) * b;
    right = (1.0 - stay) * a + stay * b;
  }
};

/// Stay probabilities for one layer, keyed by the left site of each bond.
using StayMap = std::map<int, double>;

/// Applies one brick-wall transition layer to the distribution in place.
/// The stay map must cover exactly the bonds active at time t.
void apply_transition_layer(ProbabilityVector& dist, const StayMap& stays, long t,
                            const CircuitSchedule& schedule);

/// Moves the true particle through the same layer: if `site` sits on an
/// active bond it hops to the partner with probability 1-s.
int step_particle(int site, const StayMap& stays, long t, const CircuitSchedule& schedule,
                  Rng& rng);

/// Bayes update for a detection at `site`: the estimate collapses to a
/// point mass. Throws if the estimate carries no mass there.
void bayes_detect(ProbabilityVector& dist, int site);

/// Bayes update for a miss at `site`: the mass there is removed and the
/// rest renormalized. Throws if all mass sat on `site`.
void bayes_miss(ProbabilityVector& dist, int site);

/// Scans sites in ascending order, each selected with probability `rate`;
/// a selected site equal to the true position detects, any other misses.
void classical_measurement_layer(ProbabilityVector& dist, int true_site, double rate,
                                 Rng& rng);

struct ClassicalProtocol {
  int length = 0;
  long steps = 0;
  double rate = 0.0;
  bool random_stay = true;  // s ~ U[0,1] per bond per layer; otherwise fixed
  double fixed_stay = 0.5;
  Boundary boundary = Boundary::OBC;
};

/// Called after each step with the estimate and the true position m(t).
using StepObserver = std::function<void(long t, const ProbabilityVector& dist, int particle)>;

/// Co-evolves the true particle and the Bayesian estimate from the center
/// site through T alternating transition and measurement layers, both
/// driven by the same realized stay probabilities. Checks after every
/// step that the estimate keeps positive mass at the true position.
ProbabilityVector evolve_classical_trajectory(const ClassicalProtocol& protocol, Rng& rng,
                                              const StepObserver& observer = {});

}  // namespace mfsim::cdyn
