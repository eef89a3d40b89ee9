#include "mfsim/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace mfsim::observables {

double ipr(const ProbabilityVector& dist, double q) {
  if (!(q > 0.0)) {
    throw std::invalid_argument("IPR moment order must be positive");
  }
  double sum = 0.0;
  for (double p : dist.values) {
    sum += std::pow(p, q);  // pow(0, q) = 0 for q > 0
  }
  return sum;
}

IprSample ipr_sample(const ProbabilityVector& dist, double q) {
  const double value = ipr(dist, q);
  return {q, value, std::log(value)};
}

ProbabilityVector coarse_grain(const ProbabilityVector& dist, int box_size) {
  const int length = dist.length();
  if (box_size < 1 || length % box_size != 0) {
    throw std::invalid_argument("box size " + std::to_string(box_size) +
                                " does not divide length " + std::to_string(length));
  }
  ProbabilityVector boxed;
  const int boxes = length / box_size;
  boxed.values.resize(static_cast<std::size_t>(boxes));
  for (int k = 0; k < boxes; ++k) {
    double sum = 0.0;
    for (int i = 0; i < box_size; ++i) {
      sum += dist.values[static_cast<std::size_t>(k * box_size + i)];
    }
    boxed.values[static_cast<std::size_t>(k)] = sum;
  }
  return boxed;
}

double position_variance(const ProbabilityVector& dist) {
  double first = 0.0;
  double second = 0.0;
  for (int i = 0; i < dist.length(); ++i) {
    const double p = dist.values[static_cast<std::size_t>(i)];
    const double x = static_cast<double>(i);
    first += x * p;
    second += x * x * p;
  }
  return second - first * first;
}

ProbabilityVector recenter(const ProbabilityVector& dist) {
  const int length = dist.length();
  int shift = 0;
  double best = -1.0;
  for (int i = 0; i < length; ++i) {
    if (dist.values[static_cast<std::size_t>(i)] > best) {
      best = dist.values[static_cast<std::size_t>(i)];
      shift = i;
    }
  }
  ProbabilityVector centered;
  centered.values.resize(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) {
    centered.values[static_cast<std::size_t>(k)] =
        dist.values[static_cast<std::size_t>((shift + k) % length)];
  }
  return centered;
}

void RunningStat::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStat::merge(const RunningStat& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double delta = other.mean_ - mean_;
  const long total = n_ + other.n_;
  m2_ += other.m2_ +
         delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) /
             static_cast<double>(total);
  mean_ += delta * static_cast<double>(other.n_) / static_cast<double>(total);
  n_ = total;
}

double RunningStat::mean() const {
  return n_ > 0 ? mean_ : std::numeric_limits<double>::quiet_NaN();
}

double RunningStat::sample_variance() const {
  if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
  return m2_ / static_cast<double>(n_ - 1);
}

double RunningStat::stderr_of_mean() const {
  return std::sqrt(sample_variance() / static_cast<double>(n_));
}

EnsembleStats::EnsembleStats(int length, std::vector<double> q_grid, std::vector<int> box_sizes)
    : length_(length), q_grid_(std::move(q_grid)), box_sizes_(std::move(box_sizes)) {
  if (length_ < 1) {
    throw std::invalid_argument("length must be positive");
  }
  if (q_grid_.empty() || box_sizes_.empty()) {
    throw std::invalid_argument("q grid and box list must be non-empty");
  }
  for (double q : q_grid_) {
    if (!(q > 0.0)) throw std::invalid_argument("IPR moment order must be positive");
  }
  for (int b : box_sizes_) {
    if (b < 1 || length_ % b != 0) {
      throw std::invalid_argument("box size " + std::to_string(b) + " does not divide length " +
                                  std::to_string(length_));
    }
  }
  cells_.resize(q_grid_.size() * box_sizes_.size());
}

void EnsembleStats::accumulate(const ProbabilityVector& dist) {
  if (dist.length() != length_) {
    throw std::invalid_argument("distribution length does not match accumulator");
  }
  for (std::size_t b = 0; b < box_sizes_.size(); ++b) {
    const int box = box_sizes_[b];
    const ProbabilityVector* boxed = &dist;
    ProbabilityVector scratch;
    if (box != 1) {
      scratch = coarse_grain(dist, box);
      boxed = &scratch;
    }
    for (std::size_t qi = 0; qi < q_grid_.size(); ++qi) {
      const IprSample sample = ipr_sample(*boxed, q_grid_[qi]);
      CellStats& cell = cells_[b * q_grid_.size() + qi];
      cell.ipr.add(sample.value);
      cell.log_ipr.add(sample.log_value);
    }
  }
  variance_.add(position_variance(dist));
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (other.length_ != length_ || other.q_grid_ != q_grid_ || other.box_sizes_ != box_sizes_) {
    throw std::invalid_argument("cannot merge ensemble stats over different grids");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].ipr.merge(other.cells_[i].ipr);
    cells_[i].log_ipr.merge(other.cells_[i].log_ipr);
  }
  variance_.merge(other.variance_);
}

const CellStats& EnsembleStats::cell(std::size_t q_index, std::size_t box_index) const {
  if (q_index >= q_grid_.size() || box_index >= box_sizes_.size()) {
    throw std::out_of_range("ensemble stats cell index out of range");
  }
  return cells_[box_index * q_grid_.size() + q_index];
}

double EnsembleStats::mean_ipr(std::size_t q_index, std::size_t box_index) const {
  return cell(q_index, box_index).ipr.mean();
}

double EnsembleStats::typical_ipr(std::size_t q_index, std::size_t box_index) const {
  return std::exp(cell(q_index, box_index).log_ipr.mean());
}

}  // namespace mfsim::observables
