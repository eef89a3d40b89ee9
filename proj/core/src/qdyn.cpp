#include "mfsim/qdyn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfsim::qdyn {

namespace {

constexpr double sqrt1_2 = 0.70710678118654752440;

void require_site(const Amplitudes& state, int site) {
  if (site < 0 || site >= state.length()) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside lattice of length " +
                                std::to_string(state.length()));
  }
}

double norm_squared_excluding(const Amplitudes& state, int site) {
  double sum = 0.0;
  for (int j = 0; j < state.length(); ++j) {
    if (j != site) sum += std::norm(state.values[static_cast<std::size_t>(j)]);
  }
  return sum;
}

/// Zeroes the amplitude at `site` and renormalizes; false if nothing is
/// left to renormalize.
bool project_off_site(Amplitudes& state, int site) {
  const double rest = norm_squared_excluding(state, site);
  if (rest <= 0.0) {
    return false;
  }
  state.values[static_cast<std::size_t>(site)] = Complex{0.0, 0.0};
  const double inv = 1.0 / std::sqrt(rest);
  for (Complex& c : state.values) {
    c *= inv;
  }
  return true;
}

void scale_site_split(Amplitudes& state, int site, double site_factor, double other_factor) {
  for (int j = 0; j < state.length(); ++j) {
    state.values[static_cast<std::size_t>(j)] *= (j == site) ? site_factor : other_factor;
  }
}

}  // namespace

double TwoSiteUnitary::unitarity_error() const {
  const Complex g00 = std::conj(u00) * u00 + std::conj(u10) * u10;
  const Complex g01 = std::conj(u00) * u01 + std::conj(u10) * u11;
  const Complex g10 = std::conj(u01) * u00 + std::conj(u11) * u10;
  const Complex g11 = std::conj(u01) * u01 + std::conj(u11) * u11;
  return std::max({std::abs(g00 - 1.0), std::abs(g01), std::abs(g10), std::abs(g11 - 1.0)});
}

TwoSiteUnitary sample_haar_unitary(Rng& rng) {
  // QR of a 2x2 complex Ginibre matrix by Gram-Schmidt; normalizing with
  // real positive pivots fixes the phase ambiguity, so Q is exactly Haar.
  while (true) {
    const auto [a_re, a_im] = rng.normal_pair();
    const auto [b_re, b_im] = rng.normal_pair();
    const auto [c_re, c_im] = rng.normal_pair();
    const auto [d_re, d_im] = rng.normal_pair();
    const Complex z00{a_re, a_im}, z10{b_re, b_im};
    const Complex z01{c_re, c_im}, z11{d_re, d_im};

    const double r00 = std::sqrt(std::norm(z00) + std::norm(z10));
    if (r00 <= 0.0) continue;
    const Complex q00 = z00 / r00;
    const Complex q10 = z10 / r00;

    const Complex overlap = std::conj(q00) * z01 + std::conj(q10) * z11;
    const Complex w0 = z01 - overlap * q00;
    const Complex w1 = z11 - overlap * q10;
    const double r11 = std::sqrt(std::norm(w0) + std::norm(w1));
    if (r11 <= 0.0) continue;

    return TwoSiteUnitary{q00, w0 / r11, q10, w1 / r11};
  }
}

TwoSiteUnitary fixed_gate() {
  return TwoSiteUnitary{Complex{sqrt1_2, 0.0}, Complex{sqrt1_2, 0.0}, Complex{-sqrt1_2, 0.0},
                        Complex{sqrt1_2, 0.0}};
}

void apply_unitary_layer(Amplitudes& state, const GateMap& gates, long t,
                         const CircuitSchedule& schedule) {
  if (state.length() != schedule.length) {
    throw std::invalid_argument("state length does not match schedule");
  }
  const std::vector<Bond> bonds = schedule.active_bonds(t);
  if (gates.size() != bonds.size()) {
    throw std::invalid_argument("gate map does not cover exactly the active bonds");
  }
  for (const Bond& bond : bonds) {
    if (gates.find(bond.left) == gates.end()) {
      throw std::invalid_argument("missing gate for active bond at site " +
                                  std::to_string(bond.left));
    }
  }
  for (const Bond& bond : bonds) {
    gates.at(bond.left).apply(state.values[static_cast<std::size_t>(bond.left)],
                              state.values[static_cast<std::size_t>(bond.right)]);
  }
  state.normalize();
}

OutcomeProbabilities outcome_probabilities(const Amplitudes& state, int site,
                                           const MeasurementScheme& scheme) {
  require_site(state, site);
  if (scheme.kind == SchemeKind::NoClick) {
    throw std::invalid_argument("no-click measurements have no stochastic outcome");
  }
  const double occupied = std::norm(state.values[static_cast<std::size_t>(site)]);
  double p1 = occupied;
  if (scheme.kind == SchemeKind::Generalized) {
    const double e = scheme.error_rate;
    p1 = 0.5 * e + (1.0 - e) * occupied;
  }
  p1 = std::clamp(p1, 0.0, 1.0);
  return {1.0 - p1, p1};
}

void apply_measurement(Amplitudes& state, int site, int outcome,
                       const MeasurementScheme& scheme) {
  require_site(state, site);
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
  // e = 0 is routed through the projective branch so the two schemes act
  // identically, including the +1 gauge chosen for the collapsed state.
  const bool projective_action =
      scheme.kind != SchemeKind::Generalized || scheme.error_rate == 0.0;
  if (scheme.kind == SchemeKind::NoClick && outcome != 0) {
    throw std::invalid_argument("no-click measurements only realize outcome 0");
  }
  if (projective_action) {
    if (outcome == 1) {
      if (std::norm(state.values[static_cast<std::size_t>(site)]) <= 0.0) {
        throw std::runtime_error("impossible outcome");
      }
      state = Amplitudes::delta(state.length(), site);
    } else if (!project_off_site(state, site)) {
      throw std::runtime_error("impossible outcome");
    }
    return;
  }
  const double e = scheme.error_rate;
  const double hit = std::sqrt(1.0 - 0.5 * e);
  const double miss = std::sqrt(0.5 * e);
  if (outcome == 1) {
    scale_site_split(state, site, hit, miss);
  } else {
    scale_site_split(state, site, miss, hit);
  }
  if (state.norm_squared() <= 0.0) {
    throw std::runtime_error("impossible outcome");
  }
  state.normalize();
}

std::vector<MeasurementEvent> measurement_layer(Amplitudes& state, double rate,
                                                const MeasurementScheme& scheme, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) {
    throw std::invalid_argument("measurement rate must lie in [0, 1]");
  }
  std::vector<MeasurementEvent> events;
  for (int site = 0; site < state.length(); ++site) {
    if (!rng.bernoulli(rate)) continue;
    if (scheme.kind == SchemeKind::NoClick) {
      if (!project_off_site(state, site)) {
        throw std::runtime_error("postselection impossible");
      }
      events.push_back({site, 0});
    } else {
      const OutcomeProbabilities probs = outcome_probabilities(state, site, scheme);
      const int outcome = rng.uniform() < probs.p1 ? 1 : 0;
      apply_measurement(state, site, outcome, scheme);
      events.push_back({site, outcome});
    }
  }
  return events;
}

Amplitudes evolve_quantum_trajectory(const QuantumProtocol& protocol, Rng& rng,
                                     const StepObserver& observer) {
  require_even_length(protocol.length);
  if (protocol.rate < 0.0 || protocol.rate > 1.0) {
    throw std::invalid_argument("measurement rate must lie in [0, 1]");
  }
  Amplitudes state = Amplitudes::delta(protocol.length, center_site(protocol.length));
  const CircuitSchedule schedule{protocol.length, protocol.boundary};
  const TwoSiteUnitary constant = fixed_gate();
  for (long t = 1; t <= protocol.steps; ++t) {
    schedule.for_each_bond(t, [&](int left, int right) {
      const TwoSiteUnitary gate =
          protocol.gates == GateKind::Haar ? sample_haar_unitary(rng) : constant;
      gate.apply(state.values[static_cast<std::size_t>(left)],
                 state.values[static_cast<std::size_t>(right)]);
    });
    state.normalize();
    measurement_layer(state, protocol.rate, protocol.scheme, rng);
    if (observer) observer(t, state);
  }
  return state;
}

}  // namespace mfsim::qdyn
