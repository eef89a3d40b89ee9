#pragma once

#include "mfsim/rng.hpp"
#include "mfsim/types.hpp"

namespace mfsim::analytic {

/// Mean IPR after one projective measurement of r sites on the uniform
/// state: (r + (L-r)^(2-q)) / L.
double single_shot_mean_ipr(int length, double q, int measured_sites);

/// Trajectory-averaged ln IPR for the same setup:
/// ((L-r)/L) (1-q) ln(L-r).
double single_shot_typical_ln_ipr(int length, double q, int measured_sites);

struct SingleShotExponents {
  double tau_q;       // q-1 for q < 2, 1 for q >= 2
  double tau_star_q;  // q-1
};
SingleShotExponents single_shot_exponents(double q);

/// IPR of the detected branch of a generalized measurement on the uniform
/// state: ((2-e)^q + (L-1) e^q) / ((L-1) e + 2 - e)^q, for e in (0,1].
double generalized_single_shot_ipr(int length, double q, double error_rate);

/// Discrete waiting time round(-ln(eta)/lambda), clamped below at 1.
long waiting_time_from_eta(double lambda, double eta);

/// Draws eta uniform on (0,1] and applies the rounding rule.
long reset_waiting_time(double lambda, Rng& rng);

struct ResetParams {
  int length = 0;
  double lambda = 0.0;  // resetting rate per step, typically 1/L
  long steps = 0;
};

/// Evolves a probability distribution by the s=1/2 brick-wall circuit
/// under OBC, collapsing it back to the centered delta at every reset
/// epoch; returns the distribution after `steps` layers.
ProbabilityVector simulate_reset_walk(const ResetParams& params, Rng& rng);

/// One independent stationary sample: the distribution aged by a single
/// waiting time, observed just before its reset. Epochs are i.i.d., so
/// averaging these reproduces the reset-averaged steady state.
ProbabilityVector sample_reset_epoch(int length, double lambda, Rng& rng);

/// Stationary density (1/sqrt(2L)) exp(-sqrt(2/L) |x|) of the continuum
/// walk averaged over Poissonian resets at rate 1/L.
double resetting_stationary_density(int length, double x);

/// Reset-averaged mean IPR of the continuum walk,
/// sqrt((1/q) (2 pi L)^(1-q)) Gamma((3-q)/2); diverges for q >= 3.
double resetting_mean_ipr(int length, double q);

/// Reset-averaged typical IPR, e^(gamma (q-1)/2) / sqrt(q (2 pi L)^(q-1)).
double resetting_typical_ipr(int length, double q);

/// Reset-averaged position variance, equal to L.
double resetting_variance(int length);

struct ResettingClosedForms {
  double mean_ipr;
  double typical_ipr;
  double tau_q;       // (q-1)/2
  double tau_star_q;  // (q-1)/2
  double variance;
};

/// All closed forms at once; throws for q >= 3 where the mean IPR's time
/// integral diverges.
ResettingClosedForms resetting_closed_forms(int length, double q);

}  // namespace mfsim::analytic
