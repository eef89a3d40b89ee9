#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfsim/observables.hpp"
#include "mfsim/qdyn.hpp"
#include "mfsim/rng.hpp"
#include "mfsim/scaling.hpp"
#include "mfsim/types.hpp"

namespace mfsim::ensemble {

enum class Dynamics {
  QuantumHaar,
  QuantumFixed,
  ClassicalRandom,
  ClassicalFixed,
  ResetWalk,
  SingleShot,
};

std::string dynamics_name(Dynamics d);
Dynamics dynamics_from_name(const std::string& name);

/// Measurement rate rule: either p = c/L (the regime where a constant
/// number of sites is measured per step) or an absolute per-site
/// probability. For ResetWalk the resolved value is the resetting rate.
struct RateRule {
  bool absolute = false;
  double value = 1.0;  // c when scaled, p when absolute

  double resolve(int length) const { return absolute ? value : value / length; }
  friend bool operator==(const RateRule&, const RateRule&) = default;
};

struct TimeRule {
  enum class Kind { Auto, MultipleOfL, MultipleOfLSquared, Fixed };
  Kind kind = Kind::Auto;
  double value = 0.0;
  friend bool operator==(const TimeRule&, const TimeRule&) = default;
};

std::vector<double> default_q_grid();

struct ExperimentSpec {
  Dynamics dynamics = Dynamics::QuantumHaar;
  qdyn::MeasurementScheme scheme;  // quantum dynamics only
  std::vector<int> lengths;
  RateRule rate;
  std::vector<double> q_grid = default_q_grid();
  std::vector<int> box_sizes = {1};
  TimeRule time_rule;
  long trajectories = 1000;
  Boundary boundary = Boundary::OBC;
  std::uint64_t master_seed = 1;
  int measured_sites = 1;  // SingleShot only
  bool record_recentered = true;
  bool record_time_series = false;

  /// Throws std::invalid_argument when any field combination is unusable.
  void validate() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Steady-state trajectory length: L^2 at p = 0 and 8L at p > 0 for the
/// diffusive protocols, 64L at p = 0 for the ballistic fixed-gate circuit,
/// and L^2 whenever the scheme is generalized or no-click.
long default_steps(Dynamics dynamics, const qdyn::MeasurementScheme& scheme, double rate,
                   int length);

/// Trajectory length for a spec, honoring any explicit time rule.
long resolve_steps(const ExperimentSpec& spec, int length);

/// Independent reproducible stream for one trajectory of one system size.
Rng derive_stream(std::uint64_t master_seed, int length, long trajectory_index);

struct StatsRow {
  int length;
  double rate;
  double q;
  int box_size;
  double mean_ipr;
  double mean_ipr_stderr;
  double typical_ipr;
  double typical_ipr_stderr;
  double mean_var;
  double mean_var_stderr;
  long n_traj;
};

struct TimePoint {
  long t;
  double mean_ipr2;
  double mean_ipr2_stderr;
  double mean_var;
  double mean_var_stderr;
  long n;
};

struct RunResult {
  ExperimentSpec spec;
  std::vector<StatsRow> rows;  // ordered (L, q, box) as listed in the spec
  std::map<int, std::vector<double>> recentered_mean;  // L -> mean recentered dist
  std::map<int, std::vector<TimePoint>> time_series;   // L -> logarithmic times
  double wall_seconds = 0.0;
  int workers_used = 1;
};

/// Runs the full ensemble. Numeric payloads are reproducible bit for bit
/// for a fixed master seed, independent of the worker count; `workers`
/// <= 0 means use MFSIM_WORKERS or the hardware concurrency.
RunResult run(const ExperimentSpec& spec, int workers = 0);

/// Rows flattened into fit input cells (mean_log_ipr = ln typical_ipr).
std::vector<scaling::StatsCell> to_cells(const std::vector<StatsRow>& rows);

/// Logarithmically spaced observation times in [1, steps].
std::vector<long> log_spaced_times(long steps);

}  // namespace mfsim::ensemble
