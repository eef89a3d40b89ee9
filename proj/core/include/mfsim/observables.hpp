#pragma once

#include <cstddef>
#include <vector>

#include "mfsim/types.hpp"

namespace mfsim::observables {

/// Inverse participation ratio sum_i p_i^q for q > 0, with 0^q = 0 so that
/// exact zeros from measurements are harmless.
double ipr(const ProbabilityVector& dist, double q);

/// One IPR evaluation carrying both the value and its log, the raw pair
/// every ensemble accumulator consumes.
struct IprSample {
  double q;
  double value;      // > 0; at most 1 once q >= 1
  double log_value;
};

IprSample ipr_sample(const ProbabilityVector& dist, double q);

/// Sums the distribution into contiguous boxes of size `box_size`, which
/// must divide the length.
ProbabilityVector coarse_grain(const ProbabilityVector& dist, int box_size);

/// Variance of the position, sum_i i^2 p_i - (sum_i i p_i)^2.
double position_variance(const ProbabilityVector& dist);

/// Cyclic shift placing the argmax at position 0 (ties to the smallest
/// original index). Position k of the result corresponds to the relative
/// index k for k <= L/2 and k - L for k > L/2.
ProbabilityVector recenter(const ProbabilityVector& dist);

/// Welford running mean/variance, mergeable so that partial accumulators
/// from independent workers combine exactly.
class RunningStat {
 public:
  void add(double x);
  void merge(const RunningStat& other);

  long count() const { return n_; }
  double mean() const;
  double sample_variance() const;
  double stderr_of_mean() const;

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct CellStats {
  RunningStat ipr;
  RunningStat log_ipr;
};

/// Per-trajectory IPR statistics on a (q, box size) grid plus the position
/// variance, streamed one distribution at a time.
class EnsembleStats {
 public:
  EnsembleStats() = default;
  EnsembleStats(int length, std::vector<double> q_grid, std::vector<int> box_sizes);

  void accumulate(const ProbabilityVector& dist);
  void merge(const EnsembleStats& other);

  int length() const { return length_; }
  const std::vector<double>& q_grid() const { return q_grid_; }
  const std::vector<int>& box_sizes() const { return box_sizes_; }

  const CellStats& cell(std::size_t q_index, std::size_t box_index) const;
  const RunningStat& variance_stat() const { return variance_; }

  double mean_ipr(std::size_t q_index, std::size_t box_index) const;
  double typical_ipr(std::size_t q_index, std::size_t box_index) const;

 private:
  int length_ = 0;
  std::vector<double> q_grid_;
  std::vector<int> box_sizes_;
  std::vector<CellStats> cells_;  // box-major: cells_[b * |q| + qi]
  RunningStat variance_;
};

}  // namespace mfsim::observables
