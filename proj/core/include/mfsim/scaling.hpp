#pragma once

#include <map>
#include <utility>
#include <vector>

namespace mfsim::scaling {

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<std::pair<double, double>> points_used;  // (L, value)
  double min_length = 0.0;
};

/// Ordinary least squares of ln(value) against ln(L) over points with
/// L >= min_length. Requires at least 3 qualifying points, all positive.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points,
                         double min_length);

/// Same regression but on points whose second component is already in log
/// domain (e.g. stored mean ln IPR cells).
ScalingFit fit_log_values(const std::vector<std::pair<double, double>>& log_points,
                          double min_length);

/// Weighted variant of fit_power_law; sigmas are standard errors of the
/// values (propagated to log domain internally).
ScalingFit fit_power_law_weighted(const std::vector<std::pair<double, double>>& points,
                                  const std::vector<double>& sigmas, double min_length);

/// One (L, q, box) cell of ensemble statistics used for exponent fits.
struct StatsCell {
  int length;
  double q;
  int box_size;
  double mean_ipr;
  double mean_log_ipr;
  double mean_var;
};

struct ExponentRow {
  double q = 0.0;
  int box_size = 1;
  double tau_q = 0.0;
  double tau_q_stderr = 0.0;
  double tau_star_q = 0.0;
  double tau_star_q_stderr = 0.0;
  double fractal_dim = 0.0;    // D_q = tau_q / (q-1); NaN within 0.05 of q=1
  double anomalous_dim = 0.0;  // Delta_q = tau_q - D_0 (q-1)
};

struct ExponentTable {
  std::vector<ExponentRow> rows;          // ordered (q asc within box order)
  std::map<int, double> d0_by_box;        // D_0 per box size, from q = q0
  double tau_var = 0.0;                   // variance exponent, slope/2
  double tau_var_stderr = 0.0;
  double q0 = 0.01;
  double min_length = 0.0;
};

/// Fits tau_q (mean IPR), tau*_q (typical IPR) and tau_Var across system
/// sizes for every (q, box) cell group. D_0 is tau_q/(q-1) evaluated at
/// the grid point closest to q0.
ExponentTable exponent_table(const std::vector<StatsCell>& cells, double min_length,
                             double q0 = 0.01);

}  // namespace mfsim::scaling
