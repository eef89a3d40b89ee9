#include "mfsim/cdyn.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mfsim::cdyn {

namespace {

void require_site(const ProbabilityVector& dist, int site) {
  if (site < 0 || site >= dist.length()) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside lattice of length " +
                                std::to_string(dist.length()));
  }
}

void require_rate(double rate) {
  if (rate < 0.0 || rate > 1.0) {
    throw std::invalid_argument("measurement rate must lie in [0, 1]");
  }
}

}  // namespace

void apply_transition_layer(ProbabilityVector& dist, const StayMap& stays, long t,
                            const CircuitSchedule& schedule) {
  if (dist.length() != schedule.length) {
    throw std::invalid_argument("distribution length does not match schedule");
  }
  const std::vector<Bond> bonds = schedule.active_bonds(t);
  if (stays.size() != bonds.size()) {
    throw std::invalid_argument("stay map does not cover exactly the active bonds");
  }
  for (const Bond& bond : bonds) {
    if (stays.find(bond.left) == stays.end()) {
      throw std::invalid_argument("missing stay probability for active bond at site " +
                                  std::to_string(bond.left));
    }
  }
  for (const Bond& bond : bonds) {
    TransitionMatrix{stays.at(bond.left)}.apply(
        dist.values[static_cast<std::size_t>(bond.left)],
        dist.values[static_cast<std::size_t>(bond.right)]);
  }
  dist.renormalize();
}

int step_particle(int site, const StayMap& stays, long t, const CircuitSchedule& schedule,
                  Rng& rng) {
  const Bond bond = schedule.bond_of_site(t, site);
  if (bond.left < 0) {
    return site;
  }
  const auto it = stays.find(bond.left);
  if (it == stays.end()) {
    throw std::invalid_argument("missing stay probability for active bond at site " +
                                std::to_string(bond.left));
  }
  const int partner = (bond.left == site) ? bond.right : bond.left;
  return rng.uniform() < it->second ? site : partner;
}

void bayes_detect(ProbabilityVector& dist, int site) {
  require_site(dist, site);
  if (dist.values[static_cast<std::size_t>(site)] <= 0.0) {
    throw std::runtime_error("inconsistent detection");
  }
  dist = ProbabilityVector::delta(dist.length(), site);
}

void bayes_miss(ProbabilityVector& dist, int site) {
  require_site(dist, site);
  double& at_site = dist.values[static_cast<std::size_t>(site)];
  if (at_site == 0.0) {
    return;  // nothing to remove; the update is the identity
  }
  double rest = 0.0;
  for (int j = 0; j < dist.length(); ++j) {
    if (j != site) rest += dist.values[static_cast<std::size_t>(j)];
  }
  if (rest <= 0.0) {
    throw std::runtime_error("inconsistent miss");
  }
  at_site = 0.0;
  const double inv = 1.0 / rest;
  for (double& p : dist.values) {
    p *= inv;
  }
}

void classical_measurement_layer(ProbabilityVector& dist, int true_site, double rate,
                                 Rng& rng) {
  require_site(dist, true_site);
  require_rate(rate);
  for (int site = 0; site < dist.length(); ++site) {
    if (!rng.bernoulli(rate)) continue;
    if (site == true_site) {
      bayes_detect(dist, site);
    } else {
      bayes_miss(dist, site);
    }
  }
}

ProbabilityVector evolve_classical_trajectory(const ClassicalProtocol& protocol, Rng& rng,
                                              const StepObserver& observer) {
  require_even_length(protocol.length);
  require_rate(protocol.rate);
  const int start = center_site(protocol.length);
  ProbabilityVector dist = ProbabilityVector::delta(protocol.length, start);
  int particle = start;
  const CircuitSchedule schedule{protocol.length, protocol.boundary};
  for (long t = 1; t <= protocol.steps; ++t) {
    // The estimator knows the realized stay probabilities, so the same
    // draw drives both the distribution and the true particle.
    schedule.for_each_bond(t, [&](int left, int right) {
      const double stay = protocol.random_stay ? rng.uniform() : protocol.fixed_stay;
      TransitionMatrix{stay}.apply(dist.values[static_cast<std::size_t>(left)],
                                   dist.values[static_cast<std::size_t>(right)]);
      if (particle == left || particle == right) {
        const int partner = (particle == left) ? right : left;
        particle = rng.uniform() < stay ? particle : partner;
      }
    });
    dist.renormalize();
    classical_measurement_layer(dist, particle, protocol.rate, rng);
    if (dist.values[static_cast<std::size_t>(particle)] <= 0.0) {
      throw std::logic_error("filter consistency violated: no mass at the true position");
    }
    if (observer) observer(t, dist, particle);
  }
  return dist;
}

}  // namespace mfsim::cdyn
