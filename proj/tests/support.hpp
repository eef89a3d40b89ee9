#pragma once

// Shared statistical utilities and brute-force oracles for the unit and
// acceptance suites. Everything here is deliberately independent of the
// library implementations it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfsim/qdyn.hpp"
#include "mfsim/types.hpp"

namespace support {

// ---------------------------------------------------------------------
// quadrature

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// ---------------------------------------------------------------------
// statistical tests

/// Asymptotic Kolmogorov-Smirnov p-value for samples against U[0,1].
inline double ks_uniform_p_value(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i];
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  const double x = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Pearson statistic of observed counts against expected probabilities.
inline double chi_squared_statistic(const std::vector<long>& counts,
                                    const std::vector<double>& probs, long total) {
  double statistic = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(total);
    if (expected <= 0.0) {
      if (counts[i] != 0) return HUGE_VAL;
      continue;
    }
    const double diff = static_cast<double>(counts[i]) - expected;
    statistic += diff * diff / expected;
  }
  return statistic;
}

// Upper 0.001 quantiles of the chi-squared distribution.
inline constexpr double chi2_crit_df3 = 16.266;
inline constexpr double chi2_crit_df7 = 24.322;
inline constexpr double chi2_crit_df15 = 37.697;
inline constexpr double chi2_crit_df19 = 43.820;

// ---------------------------------------------------------------------
// exhaustive enumeration of one quantum measurement layer

struct LayerBranch {
  std::vector<int> selected;   // ascending site order
  std::vector<int> outcomes;   // aligned with `selected`
  double probability;
  mfsim::Amplitudes state;
};

/// Canonical key: selection mask plus per-site outcomes.
inline std::string branch_key(int length, const LayerBranch& branch) {
  std::string key(static_cast<std::size_t>(length), '.');
  for (std::size_t i = 0; i < branch.selected.size(); ++i) {
    key[static_cast<std::size_t>(branch.selected[i])] = branch.outcomes[i] ? '1' : '0';
  }
  return key;
}

/// Expands every (selection mask, outcome sequence) branch of one
/// measurement layer, scanning sites in the given order.
inline std::vector<LayerBranch> enumerate_measurement_layer(
    const mfsim::Amplitudes& state, double rate, const mfsim::qdyn::MeasurementScheme& scheme,
    const std::vector<int>& scan_order) {
  std::vector<LayerBranch> done;
  struct Pending {
    std::size_t position;
    LayerBranch branch;
  };
  std::vector<Pending> queue;
  queue.push_back({0, {{}, {}, 1.0, state}});
  while (!queue.empty()) {
    Pending item = std::move(queue.back());
    queue.pop_back();
    if (item.position == scan_order.size()) {
      done.push_back(std::move(item.branch));
      continue;
    }
    const int site = scan_order[item.position];

    LayerBranch skipped = item.branch;
    skipped.probability *= 1.0 - rate;
    if (skipped.probability > 0.0) {
      queue.push_back({item.position + 1, std::move(skipped)});
    }

    const auto probs = mfsim::qdyn::outcome_probabilities(item.branch.state, site, scheme);
    for (int outcome : {0, 1}) {
      const double p_outcome = outcome == 0 ? probs.p0 : probs.p1;
      if (rate * p_outcome <= 0.0) continue;
      LayerBranch taken = item.branch;
      taken.probability *= rate * p_outcome;
      mfsim::qdyn::apply_measurement(taken.state, site, outcome, scheme);
      taken.selected.push_back(site);
      taken.outcomes.push_back(outcome);
      queue.push_back({item.position + 1, std::move(taken)});
    }
  }
  return done;
}

// ---------------------------------------------------------------------
// single-shot branch oracle

struct SingleShotOracle {
  double mean_ipr;
  double mean_ln_ipr;
};

/// Sequentially measures the first r sites of the uniform state with the
/// Born rule, enumerating every branch exactly. Uses plain probability
/// arithmetic only.
inline SingleShotOracle single_shot_branch_oracle(int length, double q, int measured) {
  std::vector<double> dist(static_cast<std::size_t>(length), 1.0 / length);
  const auto ipr_of = [q](const std::vector<double>& p) {
    double sum = 0.0;
    for (double x : p) sum += x > 0.0 ? std::pow(x, q) : 0.0;
    return sum;
  };

  double mean = 0.0;
  double mean_ln = 0.0;
  struct Node {
    std::vector<double> dist;
    double probability;
    int next;
  };
  std::vector<Node> queue;
  queue.push_back({dist, 1.0, 0});
  while (!queue.empty()) {
    Node node = std::move(queue.back());
    queue.pop_back();
    if (node.next == measured) {
      const double value = ipr_of(node.dist);
      mean += node.probability * value;
      mean_ln += node.probability * std::log(value);
      continue;
    }
    const int site = node.next;
    const double p_here = node.dist[static_cast<std::size_t>(site)];
    if (p_here > 0.0) {
      // detection branch: point mass at the site
      std::vector<double> collapsed(node.dist.size(), 0.0);
      collapsed[static_cast<std::size_t>(site)] = 1.0;
      queue.push_back({std::move(collapsed), node.probability * p_here, measured});
    }
    if (p_here < 1.0) {
      std::vector<double> missed = node.dist;
      missed[static_cast<std::size_t>(site)] = 0.0;
      const double rest = 1.0 - p_here;
      for (double& x : missed) x /= rest;
      queue.push_back({std::move(missed), node.probability * rest, node.next + 1});
    }
  }
  return {mean, mean_ln};
}

}  // namespace support
