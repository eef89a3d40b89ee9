#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "mfsim/analytic.hpp"
#include "mfsim/ensemble.hpp"

using namespace mfsim;
using namespace mfsim::ensemble;

TEST_SUITE_BEGIN("ensemble");

TEST_CASE("steady-state step counts") {
  const auto projective = qdyn::MeasurementScheme::projective();
  CHECK(default_steps(Dynamics::QuantumHaar, projective, 1.0 / 256, 256) == 2048);
  CHECK(default_steps(Dynamics::QuantumHaar, projective, 0.0, 128) == 128 * 128);
  CHECK(default_steps(Dynamics::QuantumFixed, projective, 0.0, 64) == 4096);
  CHECK(default_steps(Dynamics::QuantumFixed, projective, 0.25, 64) == 512);
  CHECK(default_steps(Dynamics::ClassicalRandom, projective, 0.0, 32) == 1024);
  CHECK(default_steps(Dynamics::ClassicalFixed, projective, 0.5, 32) == 256);
  CHECK(default_steps(Dynamics::QuantumHaar, qdyn::MeasurementScheme::no_click(), 0.1, 64) ==
        4096);
  CHECK(default_steps(Dynamics::QuantumHaar, qdyn::MeasurementScheme::generalized(0.5), 0.1,
                      64) == 4096);

  ExperimentSpec spec;
  spec.dynamics = Dynamics::QuantumHaar;
  spec.lengths = {64};
  spec.time_rule = {TimeRule::Kind::MultipleOfL, 8.0};
  CHECK(resolve_steps(spec, 64) == 512);
  spec.time_rule = {TimeRule::Kind::MultipleOfLSquared, 0.25};
  CHECK(resolve_steps(spec, 64) == 1024);
  spec.time_rule = {TimeRule::Kind::Fixed, 77.0};
  CHECK(resolve_steps(spec, 64) == 77);
}

TEST_CASE("spec validation rejects bad combinations") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::QuantumHaar;
  spec.lengths = {64, 128};
  spec.trajectories = 4;
  CHECK_NOTHROW(spec.validate());

  ExperimentSpec bad = spec;
  bad.lengths = {63};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.box_sizes = {3};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.rate = {true, 1.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.dynamics = Dynamics::ClassicalRandom;
  bad.scheme = qdyn::MeasurementScheme::generalized(0.5);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.dynamics = Dynamics::SingleShot;
  bad.measured_sites = 64;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.q_grid = {0.5, -1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("full-rate projective ensembles are point masses") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::QuantumHaar;
  spec.scheme = qdyn::MeasurementScheme::projective();
  spec.lengths = {8};
  spec.rate = {true, 1.0};
  spec.q_grid = {0.5, 1.0, 2.0, 3.0};
  spec.trajectories = 1;
  spec.master_seed = 5;
  const RunResult result = run(spec, 1);
  REQUIRE(result.rows.size() == 4);
  for (const StatsRow& row : result.rows) {
    CHECK(row.mean_ipr == 1.0);
    CHECK(row.typical_ipr == 1.0);
    CHECK(row.n_traj == 1);
  }
}

TEST_CASE("single-shot ensembles reproduce the closed form") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::SingleShot;
  spec.lengths = {100};
  spec.q_grid = {2.0};
  spec.trajectories = 100000;
  spec.measured_sites = 1;
  spec.master_seed = 99;
  spec.record_recentered = false;
  const RunResult result = run(spec);
  REQUIRE(result.rows.size() == 1);
  const StatsRow& row = result.rows.front();
  CHECK(std::abs(row.mean_ipr - 0.02) <= 3.0 * row.mean_ipr_stderr);
}

TEST_CASE("row coverage spans the whole grid") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::ClassicalFixed;
  spec.lengths = {16, 32};
  spec.rate = {false, 1.0};
  spec.q_grid = {0.5, 2.0, 3.0};
  spec.box_sizes = {1, 2, 4};
  spec.trajectories = 8;
  spec.master_seed = 3;
  const RunResult result = run(spec);
  CHECK(result.rows.size() == 2 * 3 * 3);
  for (const StatsRow& row : result.rows) {
    CHECK(row.n_traj == 8);
  }
  // recentered distribution recorded per system size
  CHECK(result.recentered_mean.count(16) == 1);
  CHECK(result.recentered_mean.count(32) == 1);
  CHECK(result.recentered_mean.at(32).size() == 32);
}

TEST_CASE("identical seeds give identical payloads for any worker count") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::QuantumHaar;
  spec.lengths = {16};
  spec.rate = {false, 1.0};
  spec.q_grid = {0.01, 0.5, 2.0};
  spec.box_sizes = {1, 4};
  spec.trajectories = 70;  // not a block multiple
  spec.master_seed = 12345;
  spec.record_time_series = true;

  const RunResult serial = run(spec, 1);
  const RunResult threaded = run(spec, 3);
  const RunResult oversubscribed = run(spec, 16);

  const auto rows_identical = [](const StatsRow& a, const StatsRow& b) {
    return a.length == b.length && a.rate == b.rate && a.q == b.q && a.box_size == b.box_size &&
           a.mean_ipr == b.mean_ipr && a.mean_ipr_stderr == b.mean_ipr_stderr &&
           a.typical_ipr == b.typical_ipr && a.typical_ipr_stderr == b.typical_ipr_stderr &&
           a.mean_var == b.mean_var && a.mean_var_stderr == b.mean_var_stderr &&
           a.n_traj == b.n_traj;
  };
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(rows_identical(serial.rows[i], threaded.rows[i]));
    CHECK(rows_identical(serial.rows[i], oversubscribed.rows[i]));
  }
  CHECK(serial.recentered_mean.at(16) == threaded.recentered_mean.at(16));
  REQUIRE(serial.time_series.at(16).size() == threaded.time_series.at(16).size());
  for (std::size_t i = 0; i < serial.time_series.at(16).size(); ++i) {
    CHECK(serial.time_series.at(16)[i].mean_ipr2 == threaded.time_series.at(16)[i].mean_ipr2);
    CHECK(serial.time_series.at(16)[i].mean_var == threaded.time_series.at(16)[i].mean_var);
  }
}

TEST_CASE("reset-walk ensembles land near the closed-form mean") {
  ExperimentSpec spec;
  spec.dynamics = Dynamics::ResetWalk;
  spec.lengths = {256};
  spec.rate = {false, 1.0};  // lambda = 1/L
  spec.q_grid = {2.0};
  spec.trajectories = 4000;
  spec.master_seed = 17;
  spec.record_recentered = false;
  const RunResult result = run(spec);
  const StatsRow& row = result.rows.front();
  // The continuum closed form carries an O(1) diffusion-constant offset on
  // the lattice, so only the scale is pinned here, not exact agreement.
  const double closed = analytic::resetting_mean_ipr(256, 2.0);
  CHECK(row.mean_ipr > 0.3 * closed);
  CHECK(row.mean_ipr < 3.0 * closed);
}

TEST_CASE("trajectory errors surface with size and index context") {
  // a full-rate no-click scan always empties the state
  ExperimentSpec spec;
  spec.dynamics = Dynamics::QuantumHaar;
  spec.scheme = qdyn::MeasurementScheme::no_click();
  spec.lengths = {8};
  spec.rate = {true, 1.0};
  spec.q_grid = {2.0};
  spec.trajectories = 8;
  spec.master_seed = 77;
  try {
    run(spec, 2);
    FAIL("expected a postselection failure");
  } catch (const std::runtime_error& error) {
    const std::string message = error.what();
    CHECK(message.find("L = 8") != std::string::npos);
    CHECK(message.find("trajectory") != std::string::npos);
    CHECK(message.find("postselection impossible") != std::string::npos);
  }
}

TEST_CASE("log-spaced observation times are sorted and bracketed") {
  const std::vector<long> times = log_spaced_times(4096);
  REQUIRE(!times.empty());
  CHECK(times.front() == 1);
  CHECK(times.back() == 4096);
  for (std::size_t i = 1; i < times.size(); ++i) {
    CHECK(times[i] > times[i - 1]);
  }
}

TEST_SUITE_END();
