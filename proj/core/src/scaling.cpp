#include "mfsim/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace mfsim::scaling {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double slope_stderr;
};

LineFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double x_bar = 0.0, y_bar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_bar += xs[i];
    y_bar += ys[i];
  }
  x_bar /= static_cast<double>(n);
  y_bar /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - x_bar;
    sxx += dx * dx;
    sxy += dx * (ys[i] - y_bar);
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("degenerate fit: all abscissae coincide");
  }
  const double slope = sxy / sxx;
  const double intercept = y_bar - slope * x_bar;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = ys[i] - intercept - slope * xs[i];
    rss += resid * resid;
  }
  double stderr_slope = 0.0;
  if (n > 2) {
    stderr_slope = std::sqrt(std::max(rss, 0.0) / (static_cast<double>(n - 2) * sxx));
  }
  return {slope, intercept, stderr_slope};
}

std::vector<std::pair<double, double>> qualifying(
    const std::vector<std::pair<double, double>>& points, double min_length) {
  std::vector<std::pair<double, double>> kept;
  for (const auto& [length, value] : points) {
    if (length >= min_length) kept.push_back({length, value});
  }
  if (kept.size() < 3) {
    throw std::invalid_argument("power-law fit needs at least 3 points with L >= " +
                                std::to_string(min_length) + ", got " +
                                std::to_string(kept.size()));
  }
  return kept;
}

}  // namespace

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points,
                         double min_length) {
  ScalingFit fit;
  fit.points_used = qualifying(points, min_length);
  fit.min_length = min_length;
  std::vector<double> xs, ys;
  for (const auto& [length, value] : fit.points_used) {
    if (!(value > 0.0)) {
      throw std::invalid_argument("power-law fit requires positive values");
    }
    xs.push_back(std::log(length));
    ys.push_back(std::log(value));
  }
  const LineFit line = ols(xs, ys);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.slope_stderr = line.slope_stderr;
  return fit;
}

ScalingFit fit_log_values(const std::vector<std::pair<double, double>>& log_points,
                          double min_length) {
  ScalingFit fit;
  fit.points_used = qualifying(log_points, min_length);
  fit.min_length = min_length;
  std::vector<double> xs, ys;
  for (const auto& [length, log_value] : fit.points_used) {
    xs.push_back(std::log(length));
    ys.push_back(log_value);
  }
  const LineFit line = ols(xs, ys);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.slope_stderr = line.slope_stderr;
  return fit;
}

ScalingFit fit_power_law_weighted(const std::vector<std::pair<double, double>>& points,
                                  const std::vector<double>& sigmas, double min_length) {
  if (sigmas.size() != points.size()) {
    throw std::invalid_argument("one standard error per point is required");
  }
  std::vector<std::pair<double, double>> kept;
  std::vector<double> weights;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first < min_length) continue;
    if (!(points[i].second > 0.0)) {
      throw std::invalid_argument("power-law fit requires positive values");
    }
    if (!(sigmas[i] > 0.0)) {
      throw std::invalid_argument("weighted fit requires positive standard errors");
    }
    kept.push_back(points[i]);
    const double log_sigma = sigmas[i] / points[i].second;  // delta method
    weights.push_back(1.0 / (log_sigma * log_sigma));
  }
  if (kept.size() < 3) {
    throw std::invalid_argument("power-law fit needs at least 3 points with L >= " +
                                std::to_string(min_length));
  }

  double wsum = 0.0, x_bar = 0.0, y_bar = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    xs.push_back(std::log(kept[i].first));
    ys.push_back(std::log(kept[i].second));
    wsum += weights[i];
    x_bar += weights[i] * xs[i];
    y_bar += weights[i] * ys[i];
  }
  x_bar /= wsum;
  y_bar /= wsum;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double dx = xs[i] - x_bar;
    sxx += weights[i] * dx * dx;
    sxy += weights[i] * dx * (ys[i] - y_bar);
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("degenerate fit: all abscissae coincide");
  }
  ScalingFit fit;
  fit.points_used = kept;
  fit.min_length = min_length;
  fit.slope = sxy / sxx;
  fit.intercept = y_bar - fit.slope * x_bar;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

ExponentTable exponent_table(const std::vector<StatsCell>& cells, double min_length,
                             double q0) {
  ExponentTable table;
  table.q0 = q0;
  table.min_length = min_length;

  std::set<double> q_values;
  std::set<int> boxes;
  for (const StatsCell& cell : cells) {
    q_values.insert(cell.q);
    boxes.insert(cell.box_size);
  }
  if (q_values.empty()) {
    throw std::invalid_argument("no cells to fit");
  }

  const auto cells_for = [&](int box, double q) {
    std::vector<const StatsCell*> group;
    for (const StatsCell& cell : cells) {
      if (cell.box_size == box && cell.q == q) group.push_back(&cell);
    }
    std::sort(group.begin(), group.end(),
              [](const StatsCell* a, const StatsCell* b) { return a->length < b->length; });
    return group;
  };

  double q_for_d0 = *q_values.begin();
  for (double q : q_values) {
    if (std::abs(q - q0) < std::abs(q_for_d0 - q0)) q_for_d0 = q;
  }

  for (int box : boxes) {
    std::vector<ExponentRow> box_rows;
    for (double q : q_values) {
      const auto group = cells_for(box, q);
      std::vector<std::pair<double, double>> mean_points, log_points;
      for (const StatsCell* cell : group) {
        mean_points.push_back({static_cast<double>(cell->length), cell->mean_ipr});
        log_points.push_back({static_cast<double>(cell->length), cell->mean_log_ipr});
      }
      const ScalingFit mean_fit = fit_power_law(mean_points, min_length);
      const ScalingFit log_fit = fit_log_values(log_points, min_length);
      ExponentRow row;
      row.q = q;
      row.box_size = box;
      row.tau_q = -mean_fit.slope;
      row.tau_q_stderr = mean_fit.slope_stderr;
      row.tau_star_q = -log_fit.slope;
      row.tau_star_q_stderr = log_fit.slope_stderr;
      row.fractal_dim = std::abs(q - 1.0) > 0.05 ? row.tau_q / (q - 1.0)
                                                 : std::numeric_limits<double>::quiet_NaN();
      box_rows.push_back(row);
    }
    double d0 = std::numeric_limits<double>::quiet_NaN();
    for (const ExponentRow& row : box_rows) {
      if (row.q == q_for_d0) d0 = row.tau_q / (q_for_d0 - 1.0);
    }
    table.d0_by_box[box] = d0;
    for (ExponentRow& row : box_rows) {
      row.anomalous_dim = row.tau_q - d0 * (row.q - 1.0);
      table.rows.push_back(row);
    }
  }

  // The position variance is independent of q and box; fit it once.
  std::vector<std::pair<double, double>> var_points;
  for (const StatsCell* cell : cells_for(*boxes.begin(), *q_values.begin())) {
    var_points.push_back({static_cast<double>(cell->length), cell->mean_var});
  }
  const ScalingFit var_fit = fit_power_law(var_points, min_length);
  table.tau_var = 0.5 * var_fit.slope;  // <Var> ~ L^(2 tau_Var)
  table.tau_var_stderr = 0.5 * var_fit.slope_stderr;
  return table;
}

}  // namespace mfsim::scaling
