#include "mfsim/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "mfsim/schedule.hpp"

namespace mfsim::analytic {

namespace {

constexpr double euler_gamma = 0.57721566490153286061;
constexpr double two_pi = 6.28318530717958647692;

void require_params(int length, double q, int measured_sites) {
  require_even_length(length);
  if (!(q > 0.0)) {
    throw std::invalid_argument("IPR moment order must be positive");
  }
  if (measured_sites < 1 || measured_sites >= length) {
    throw std::invalid_argument("measured site count must lie in [1, L)");
  }
}

void require_reset_args(int length, double q) {
  require_even_length(length);
  if (!(q > 0.0)) {
    throw std::invalid_argument("IPR moment order must be positive");
  }
}

}  // namespace

double single_shot_mean_ipr(int length, double q, int measured_sites) {
  require_params(length, q, measured_sites);
  const double L = static_cast<double>(length);
  const double r = static_cast<double>(measured_sites);
  return (r + std::pow(L - r, 2.0 - q)) / L;
}

double single_shot_typical_ln_ipr(int length, double q, int measured_sites) {
  require_params(length, q, measured_sites);
  const double L = static_cast<double>(length);
  const double r = static_cast<double>(measured_sites);
  return ((L - r) / L) * (1.0 - q) * std::log(L - r);
}

SingleShotExponents single_shot_exponents(double q) {
  if (!(q > 0.0)) {
    throw std::invalid_argument("IPR moment order must be positive");
  }
  return {q < 2.0 ? q - 1.0 : 1.0, q - 1.0};
}

double generalized_single_shot_ipr(int length, double q, double error_rate) {
  require_even_length(length);
  if (!(q > 0.0)) {
    throw std::invalid_argument("IPR moment order must be positive");
  }
  if (!(error_rate > 0.0) || error_rate > 1.0) {
    throw std::invalid_argument(
        "error rate must lie in (0, 1]; the errorless branch is projective with IPR 1");
  }
  const double L = static_cast<double>(length);
  const double e = error_rate;
  const double numerator = std::pow(2.0 - e, q) + (L - 1.0) * std::pow(e, q);
  return numerator / std::pow((L - 1.0) * e + 2.0 - e, q);
}

long waiting_time_from_eta(double lambda, double eta) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("resetting rate must be positive");
  }
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  const long tau = std::llround(-std::log(eta) / lambda);
  return tau < 1 ? 1 : tau;  // a zero wait would stall discrete time
}

long reset_waiting_time(double lambda, Rng& rng) {
  return waiting_time_from_eta(lambda, rng.uniform_pos());
}

namespace {

void half_mix_layer(ProbabilityVector& dist, long t, const CircuitSchedule& schedule) {
  schedule.for_each_bond(t, [&](int left, int right) {
    const double mean = 0.5 * (dist.values[static_cast<std::size_t>(left)] +
                               dist.values[static_cast<std::size_t>(right)]);
    dist.values[static_cast<std::size_t>(left)] = mean;
    dist.values[static_cast<std::size_t>(right)] = mean;
  });
}

}  // namespace

ProbabilityVector simulate_reset_walk(const ResetParams& params, Rng& rng) {
  require_even_length(params.length);
  if (!(params.lambda > 0.0)) {
    throw std::invalid_argument("resetting rate must be positive");
  }
  if (params.steps < 0) {
    throw std::invalid_argument("step count must be nonnegative");
  }
  const CircuitSchedule schedule{params.length, Boundary::OBC};
  ProbabilityVector dist = ProbabilityVector::delta(params.length, center_site(params.length));
  long countdown = reset_waiting_time(params.lambda, rng);
  for (long t = 1; t <= params.steps; ++t) {
    half_mix_layer(dist, t, schedule);
    dist.renormalize();
    if (--countdown == 0) {
      dist = ProbabilityVector::delta(params.length, center_site(params.length));
      countdown = reset_waiting_time(params.lambda, rng);
    }
  }
  return dist;
}

ProbabilityVector sample_reset_epoch(int length, double lambda, Rng& rng) {
  require_even_length(length);
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("resetting rate must be positive");
  }
  // One inter-reset interval observed just before the collapse. The layer
  // parity at the epoch start is equidistributed in a long run, so it is
  // drawn at random here.
  const CircuitSchedule schedule{length, Boundary::OBC};
  const long age = reset_waiting_time(lambda, rng);
  const long parity = static_cast<long>(rng.below(2));
  ProbabilityVector dist = ProbabilityVector::delta(length, center_site(length));
  for (long k = 1; k <= age; ++k) {
    half_mix_layer(dist, parity + k, schedule);
  }
  dist.renormalize();
  return dist;
}

double resetting_stationary_density(int length, double x) {
  require_even_length(length);
  const double L = static_cast<double>(length);
  return std::exp(-std::sqrt(2.0 / L) * std::abs(x)) / std::sqrt(2.0 * L);
}

double resetting_mean_ipr(int length, double q) {
  require_reset_args(length, q);
  if (q >= 3.0) {
    throw std::runtime_error("divergent time integral");
  }
  const double L = static_cast<double>(length);
  return std::sqrt(std::pow(two_pi * L, 1.0 - q) / q) * std::tgamma(0.5 * (3.0 - q));
}

double resetting_typical_ipr(int length, double q) {
  require_reset_args(length, q);
  const double L = static_cast<double>(length);
  return std::exp(0.5 * euler_gamma * (q - 1.0)) / std::sqrt(q * std::pow(two_pi * L, q - 1.0));
}

double resetting_variance(int length) {
  require_even_length(length);
  return static_cast<double>(length);
}

ResettingClosedForms resetting_closed_forms(int length, double q) {
  ResettingClosedForms forms{};
  forms.mean_ipr = resetting_mean_ipr(length, q);
  forms.typical_ipr = resetting_typical_ipr(length, q);
  forms.tau_q = 0.5 * (q - 1.0);
  forms.tau_star_q = 0.5 * (q - 1.0);
  forms.variance = resetting_variance(length);
  return forms;
}

}  // namespace mfsim::analytic
