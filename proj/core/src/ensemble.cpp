#include "mfsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mfsim/analytic.hpp"
#include "mfsim/cdyn.hpp"

namespace mfsim::ensemble {

namespace {

constexpr long kBlockSize = 16;  // trajectories per merge block, fixed so
                                 // that the merge order never depends on
                                 // the worker count

}  // namespace

std::string dynamics_name(Dynamics d) {
  switch (d) {
    case Dynamics::QuantumHaar: return "quantum_haar";
    case Dynamics::QuantumFixed: return "quantum_fixed";
    case Dynamics::ClassicalRandom: return "classical_random";
    case Dynamics::ClassicalFixed: return "classical_fixed";
    case Dynamics::ResetWalk: return "reset_walk";
    case Dynamics::SingleShot: return "single_shot";
  }
  throw std::logic_error("unreachable dynamics kind");
}

Dynamics dynamics_from_name(const std::string& name) {
  if (name == "quantum_haar") return Dynamics::QuantumHaar;
  if (name == "quantum_fixed") return Dynamics::QuantumFixed;
  if (name == "classical_random") return Dynamics::ClassicalRandom;
  if (name == "classical_fixed") return Dynamics::ClassicalFixed;
  if (name == "reset_walk") return Dynamics::ResetWalk;
  if (name == "single_shot") return Dynamics::SingleShot;
  throw std::invalid_argument("unknown dynamics '" + name + "'");
}

std::vector<double> default_q_grid() {
  std::vector<double> grid = {0.01};
  for (int i = 1; i <= 16; ++i) {
    grid.push_back(0.25 * i);
  }
  return grid;
}

void ExperimentSpec::validate() const {
  if (lengths.empty()) throw std::invalid_argument("L_list must not be empty");
  for (int length : lengths) require_even_length(length);
  if (q_grid.empty()) throw std::invalid_argument("q_grid must not be empty");
  for (double q : q_grid) {
    if (!(q > 0.0)) throw std::invalid_argument("q_grid entries must be positive");
  }
  if (box_sizes.empty()) throw std::invalid_argument("l_box_list must not be empty");
  for (int box : box_sizes) {
    for (int length : lengths) {
      if (box < 1 || length % box != 0) {
        throw std::invalid_argument("box size " + std::to_string(box) +
                                    " does not divide L = " + std::to_string(length));
      }
    }
  }
  if (trajectories < 1) throw std::invalid_argument("n_traj must be at least 1");
  if (rate.value < 0.0) throw std::invalid_argument("measurement rate must be nonnegative");
  for (int length : lengths) {
    const double p = rate.resolve(length);
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("resolved rate " + std::to_string(p) + " at L = " +
                                  std::to_string(length) + " lies outside [0, 1]");
    }
    if (dynamics == Dynamics::ResetWalk && !(p > 0.0)) {
      throw std::invalid_argument("reset_walk requires a positive resetting rate");
    }
  }
  if (scheme.error_rate < 0.0 || scheme.error_rate > 1.0) {
    throw std::invalid_argument("measurement error rate must lie in [0, 1]");
  }
  const bool quantum = dynamics == Dynamics::QuantumHaar || dynamics == Dynamics::QuantumFixed;
  if (!quantum && scheme.kind != qdyn::SchemeKind::Projective) {
    throw std::invalid_argument("non-projective schemes apply to quantum dynamics only");
  }
  if (dynamics == Dynamics::SingleShot) {
    for (int length : lengths) {
      if (measured_sites < 1 || measured_sites >= length) {
        throw std::invalid_argument("single_shot requires 1 <= r_sites < L");
      }
    }
  }
  if (record_time_series &&
      (dynamics == Dynamics::ResetWalk || dynamics == Dynamics::SingleShot)) {
    throw std::invalid_argument("time series recording requires a time-evolving circuit");
  }
  if (time_rule.kind != TimeRule::Kind::Auto && !(time_rule.value > 0.0)) {
    throw std::invalid_argument("explicit time rules need a positive value");
  }
}

long default_steps(Dynamics dynamics, const qdyn::MeasurementScheme& scheme, double rate,
                   int length) {
  const long L = length;
  switch (dynamics) {
    case Dynamics::QuantumHaar:
    case Dynamics::QuantumFixed:
      if (scheme.kind != qdyn::SchemeKind::Projective) {
        return L * L;
      }
      if (rate > 0.0) {
        return 8 * L;
      }
      return dynamics == Dynamics::QuantumFixed ? 64 * L : L * L;
    case Dynamics::ClassicalRandom:
    case Dynamics::ClassicalFixed:
      return rate > 0.0 ? 8 * L : L * L;
    case Dynamics::ResetWalk:
    case Dynamics::SingleShot:
      return L * L;  // nominal; reset sampling is per epoch, single shot is one layer
  }
  throw std::logic_error("unreachable dynamics kind");
}

long resolve_steps(const ExperimentSpec& spec, int length) {
  switch (spec.time_rule.kind) {
    case TimeRule::Kind::Auto:
      return default_steps(spec.dynamics, spec.scheme, spec.rate.resolve(length), length);
    case TimeRule::Kind::MultipleOfL:
      return std::lround(spec.time_rule.value * length);
    case TimeRule::Kind::MultipleOfLSquared:
      return std::lround(spec.time_rule.value * static_cast<double>(length) * length);
    case TimeRule::Kind::Fixed:
      return std::lround(spec.time_rule.value);
  }
  throw std::logic_error("unreachable time rule kind");
}

Rng derive_stream(std::uint64_t master_seed, int length, long trajectory_index) {
  return Rng::from_words(master_seed, static_cast<std::uint64_t>(length),
                         static_cast<std::uint64_t>(trajectory_index));
}

std::vector<long> log_spaced_times(long steps) {
  std::vector<long> times;
  if (steps < 1) return times;
  double value = 1.0;
  long last = 0;
  while (true) {
    const long t = std::lround(value);
    if (t > steps) break;
    if (t > last) {
      times.push_back(t);
      last = t;
    }
    value *= 1.25;
  }
  if (times.empty() || times.back() != steps) times.push_back(steps);
  return times;
}

namespace {

struct BlockAccumulator {
  observables::EnsembleStats stats;
  std::vector<double> recentered_sum;
  long recentered_count = 0;
  std::vector<observables::RunningStat> ts_ipr2;
  std::vector<observables::RunningStat> ts_var;
};

struct SizeTask {
  const ExperimentSpec* spec;
  int length;
  double rate;
  long steps;
  std::vector<long> times;
};

ProbabilityVector run_single_shot(const ExperimentSpec& spec, int length, Rng& rng) {
  ProbabilityVector dist = ProbabilityVector::uniform(length);
  // Choose r distinct sites by a partial Fisher-Yates pass, then scan them
  // in ascending order with Born-rule outcomes.
  std::vector<int> sites(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) sites[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < spec.measured_sites; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(length - i)));
    std::swap(sites[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(j)]);
  }
  sites.resize(static_cast<std::size_t>(spec.measured_sites));
  std::sort(sites.begin(), sites.end());
  for (int site : sites) {
    const double p_detect = dist.values[static_cast<std::size_t>(site)];
    if (rng.uniform() < p_detect) {
      cdyn::bayes_detect(dist, site);
    } else {
      cdyn::bayes_miss(dist, site);
    }
  }
  return dist;
}

void run_trajectory(const SizeTask& task, long index, BlockAccumulator& block) {
  const ExperimentSpec& spec = *task.spec;
  Rng rng = derive_stream(spec.master_seed, task.length, index);
  ProbabilityVector dist;

  std::size_t cursor = 0;
  const auto record = [&](long t, const ProbabilityVector& current) {
    if (cursor < task.times.size() && t == task.times[cursor]) {
      block.ts_ipr2[cursor].add(observables::ipr(current, 2.0));
      block.ts_var[cursor].add(observables::position_variance(current));
      ++cursor;
    }
  };

  switch (spec.dynamics) {
    case Dynamics::QuantumHaar:
    case Dynamics::QuantumFixed: {
      qdyn::QuantumProtocol protocol;
      protocol.length = task.length;
      protocol.steps = task.steps;
      protocol.rate = task.rate;
      protocol.scheme = spec.scheme;
      protocol.gates = spec.dynamics == Dynamics::QuantumHaar ? qdyn::GateKind::Haar
                                                              : qdyn::GateKind::Fixed;
      protocol.boundary = spec.boundary;
      qdyn::StepObserver observer;
      if (!task.times.empty()) {
        observer = [&](long t, const Amplitudes& state) { record(t, probabilities(state)); };
      }
      dist = probabilities(qdyn::evolve_quantum_trajectory(protocol, rng, observer));
      break;
    }
    case Dynamics::ClassicalRandom:
    case Dynamics::ClassicalFixed: {
      cdyn::ClassicalProtocol protocol;
      protocol.length = task.length;
      protocol.steps = task.steps;
      protocol.rate = task.rate;
      protocol.random_stay = spec.dynamics == Dynamics::ClassicalRandom;
      protocol.fixed_stay = 0.5;
      protocol.boundary = spec.boundary;
      cdyn::StepObserver observer;
      if (!task.times.empty()) {
        observer = [&](long t, const ProbabilityVector& current, int) { record(t, current); };
      }
      dist = cdyn::evolve_classical_trajectory(protocol, rng, observer);
      break;
    }
    case Dynamics::ResetWalk:
      dist = analytic::sample_reset_epoch(task.length, task.rate, rng);
      break;
    case Dynamics::SingleShot:
      dist = run_single_shot(spec, task.length, rng);
      break;
  }

  block.stats.accumulate(dist);
  if (spec.record_recentered) {
    const ProbabilityVector centered = observables::recenter(dist);
    for (int i = 0; i < task.length; ++i) {
      block.recentered_sum[static_cast<std::size_t>(i)] +=
          centered.values[static_cast<std::size_t>(i)];
    }
    ++block.recentered_count;
  }
}

void run_block(const SizeTask& task, long begin, long end, BlockAccumulator& block) {
  for (long index = begin; index < end; ++index) {
    try {
      run_trajectory(task, index, block);
    } catch (const std::exception& error) {
      throw std::runtime_error("L = " + std::to_string(task.length) + ", trajectory " +
                               std::to_string(index) + ": " + error.what());
    }
  }
}

int pick_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MFSIM_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

RunResult run(const ExperimentSpec& spec, int workers) {
  spec.validate();
  const auto start_time = std::chrono::steady_clock::now();

  RunResult result;
  result.spec = spec;
  result.workers_used = pick_worker_count(workers);

  for (int length : spec.lengths) {
    SizeTask task;
    task.spec = &spec;
    task.length = length;
    task.rate = spec.rate.resolve(length);
    task.steps = resolve_steps(spec, length);
    if (spec.record_time_series) {
      task.times = log_spaced_times(task.steps);
    }

    const long n_blocks = (spec.trajectories + kBlockSize - 1) / kBlockSize;
    std::vector<BlockAccumulator> blocks(static_cast<std::size_t>(n_blocks));
    for (BlockAccumulator& block : blocks) {
      block.stats = observables::EnsembleStats(length, spec.q_grid, spec.box_sizes);
      if (spec.record_recentered) {
        block.recentered_sum.assign(static_cast<std::size_t>(length), 0.0);
      }
      block.ts_ipr2.resize(task.times.size());
      block.ts_var.resize(task.times.size());
    }

    std::atomic<long> next_block{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;
    const auto worker = [&]() {
      while (!failed.load(std::memory_order_relaxed)) {
        const long b = next_block.fetch_add(1);
        if (b >= n_blocks) break;
        const long begin = b * kBlockSize;
        const long end = std::min(spec.trajectories, begin + kBlockSize);
        try {
          run_block(task, begin, end, blocks[static_cast<std::size_t>(b)]);
        } catch (const std::exception& error) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) error_message = error.what();
        }
      }
    };

    const int n_threads = static_cast<int>(
        std::min<long>(result.workers_used, std::max<long>(n_blocks, 1)));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(n_threads));
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      for (std::thread& thread : pool) thread.join();
    }
    if (failed.load()) {
      throw std::runtime_error(error_message);
    }

    // Merge in block order so results do not depend on the worker count.
    observables::EnsembleStats stats(length, spec.q_grid, spec.box_sizes);
    std::vector<double> recentered_sum;
    long recentered_count = 0;
    if (spec.record_recentered) recentered_sum.assign(static_cast<std::size_t>(length), 0.0);
    std::vector<observables::RunningStat> ts_ipr2(task.times.size());
    std::vector<observables::RunningStat> ts_var(task.times.size());
    for (const BlockAccumulator& block : blocks) {
      stats.merge(block.stats);
      if (spec.record_recentered) {
        for (std::size_t i = 0; i < recentered_sum.size(); ++i) {
          recentered_sum[i] += block.recentered_sum[i];
        }
        recentered_count += block.recentered_count;
      }
      for (std::size_t i = 0; i < task.times.size(); ++i) {
        ts_ipr2[i].merge(block.ts_ipr2[i]);
        ts_var[i].merge(block.ts_var[i]);
      }
    }

    for (std::size_t qi = 0; qi < spec.q_grid.size(); ++qi) {
      for (std::size_t bi = 0; bi < spec.box_sizes.size(); ++bi) {
        const observables::CellStats& cell = stats.cell(qi, bi);
        StatsRow row;
        row.length = length;
        row.rate = task.rate;
        row.q = spec.q_grid[qi];
        row.box_size = spec.box_sizes[bi];
        row.mean_ipr = cell.ipr.mean();
        row.mean_ipr_stderr = cell.ipr.stderr_of_mean();
        row.typical_ipr = std::exp(cell.log_ipr.mean());
        row.typical_ipr_stderr = row.typical_ipr * cell.log_ipr.stderr_of_mean();
        row.mean_var = stats.variance_stat().mean();
        row.mean_var_stderr = stats.variance_stat().stderr_of_mean();
        row.n_traj = cell.ipr.count();
        result.rows.push_back(row);
      }
    }

    if (spec.record_recentered && recentered_count > 0) {
      std::vector<double> mean(recentered_sum.size());
      for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] = recentered_sum[i] / static_cast<double>(recentered_count);
      }
      result.recentered_mean[length] = std::move(mean);
    }
    if (spec.record_time_series) {
      std::vector<TimePoint> series;
      series.reserve(task.times.size());
      for (std::size_t i = 0; i < task.times.size(); ++i) {
        TimePoint point;
        point.t = task.times[i];
        point.mean_ipr2 = ts_ipr2[i].mean();
        point.mean_ipr2_stderr = ts_ipr2[i].stderr_of_mean();
        point.mean_var = ts_var[i].mean();
        point.mean_var_stderr = ts_var[i].stderr_of_mean();
        point.n = ts_ipr2[i].count();
        series.push_back(point);
      }
      result.time_series[length] = std::move(series);
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return result;
}

std::vector<scaling::StatsCell> to_cells(const std::vector<StatsRow>& rows) {
  std::vector<scaling::StatsCell> cells;
  cells.reserve(rows.size());
  for (const StatsRow& row : rows) {
    scaling::StatsCell cell;
    cell.length = row.length;
    cell.q = row.q;
    cell.box_size = row.box_size;
    cell.mean_ipr = row.mean_ipr;
    cell.mean_log_ipr = std::log(row.typical_ipr);
    cell.mean_var = row.mean_var;
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace mfsim::ensemble
