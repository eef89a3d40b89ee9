#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfsim/analytic.hpp"
#include "mfsim/rng.hpp"
#include "mfsim/scaling.hpp"

using namespace mfsim;
using namespace mfsim::scaling;

TEST_SUITE_BEGIN("scaling");

TEST_CASE("exact power laws fit exactly") {
  std::vector<std::pair<double, double>> points;
  for (double length : {128.0, 256.0, 512.0, 1024.0}) {
    points.push_back({length, std::pow(length, -0.5)});
  }
  const ScalingFit fit = fit_power_law(points, 128.0);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.slope_stderr < 1e-12);
  CHECK(fit.points_used.size() == 4);

  std::vector<std::pair<double, double>> flat;
  for (double length : {64.0, 128.0, 256.0}) flat.push_back({length, 1.0});
  CHECK(fit_power_law(flat, 0.0).slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("noisy power laws fit within tolerance") {
  Rng rng(1);
  std::vector<std::pair<double, double>> points;
  for (double length : {64.0, 128.0, 256.0, 512.0, 1024.0, 2048.0}) {
    const double noise = 0.01 * rng.normal_pair().first;
    points.push_back({length, 3.7 * std::pow(length, -1.0) * (1.0 + noise)});
  }
  const ScalingFit fit = fit_power_law(points, 0.0);
  CHECK(std::abs(fit.slope + 1.0) < 0.05);
}

TEST_CASE("fit input validation") {
  std::vector<std::pair<double, double>> points = {{64.0, 1.0}, {128.0, 0.5}, {256.0, 0.25}};
  CHECK_THROWS_AS(fit_power_law(points, 128.0), std::invalid_argument);  // 2 qualify
  points.push_back({512.0, -0.125});
  CHECK_THROWS_AS(fit_power_law(points, 0.0), std::invalid_argument);  // nonpositive
}

TEST_CASE("scale equivariance: prefactors move only the intercept") {
  std::vector<std::pair<double, double>> base, scaled;
  for (double length : {64.0, 128.0, 256.0, 512.0}) {
    const double value = std::pow(length, -0.73) * (1.0 + 0.05 * std::sin(length));
    base.push_back({length, value});
    scaled.push_back({length, 1e6 * value});
  }
  const ScalingFit a = fit_power_law(base, 0.0);
  const ScalingFit b = fit_power_law(scaled, 0.0);
  CHECK(std::abs(a.slope - b.slope) < 1e-12);
  CHECK(b.intercept - a.intercept == doctest::Approx(std::log(1e6)).epsilon(1e-12));
}

TEST_CASE("weighted fits honor the standard errors") {
  // an outlier with a huge error bar should barely matter
  std::vector<std::pair<double, double>> points;
  std::vector<double> sigmas;
  for (double length : {64.0, 128.0, 256.0, 512.0}) {
    points.push_back({length, std::pow(length, -0.5)});
    sigmas.push_back(1e-6 * points.back().second);
  }
  points.push_back({1024.0, 10.0 * std::pow(1024.0, -0.5)});
  sigmas.push_back(1e3);
  const ScalingFit fit = fit_power_law_weighted(points, sigmas, 0.0);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("fitting the log cell equals fitting the log of the mean") {
  std::vector<std::pair<double, double>> values, logs;
  for (double length : {64.0, 128.0, 256.0, 512.0}) {
    const double value = 2.0 * std::pow(length, -0.61);
    values.push_back({length, value});
    logs.push_back({length, std::log(value)});
  }
  const ScalingFit from_values = fit_power_law(values, 0.0);
  const ScalingFit from_logs = fit_log_values(logs, 0.0);
  CHECK(std::abs(from_values.slope - from_logs.slope) < 1e-12);
  CHECK(std::abs(from_values.intercept - from_logs.intercept) < 1e-12);
}

namespace {

std::vector<StatsCell> synthetic_extended_cells(const std::vector<int>& lengths,
                                                const std::vector<double>& qs) {
  std::vector<StatsCell> cells;
  for (int length : lengths) {
    for (double q : qs) {
      StatsCell cell;
      cell.length = length;
      cell.q = q;
      cell.box_size = 1;
      cell.mean_ipr = std::pow(static_cast<double>(length), 1.0 - q);
      cell.mean_log_ipr = (1.0 - q) * std::log(static_cast<double>(length));
      cell.mean_var = static_cast<double>(length) * static_cast<double>(length);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace

TEST_CASE("extended ansatz gives tau_q = q-1, D_q = 1, Delta_q = 0") {
  const auto cells =
      synthetic_extended_cells({128, 256, 512, 1024}, {0.01, 0.5, 1.0, 2.0, 3.0});
  const ExponentTable table = exponent_table(cells, 128.0, 0.01);
  REQUIRE(table.rows.size() == 5);
  for (const ExponentRow& row : table.rows) {
    CHECK(row.tau_q == doctest::Approx(row.q - 1.0).epsilon(1e-10));
    CHECK(row.tau_star_q == doctest::Approx(row.q - 1.0).epsilon(1e-10));
    if (std::abs(row.q - 1.0) > 0.05) {
      CHECK(row.fractal_dim == doctest::Approx(1.0).epsilon(1e-10));
    } else {
      CHECK(std::isnan(row.fractal_dim));
    }
    CHECK(std::abs(row.anomalous_dim) < 1e-10);
  }
  CHECK(table.d0_by_box.at(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(table.tau_var == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-shot closed-form cells approach the large-q limits") {
  std::vector<StatsCell> cells;
  const double q = 3.0;
  for (int length : {1000, 10000, 100000}) {
    StatsCell cell;
    cell.length = length;
    cell.q = q;
    cell.box_size = 1;
    cell.mean_ipr = analytic::single_shot_mean_ipr(length, q, 1);
    cell.mean_log_ipr = analytic::single_shot_typical_ln_ipr(length, q, 1);
    cell.mean_var = static_cast<double>(length);  // placeholder scale for the var fit
    cells.push_back(cell);
  }
  const ExponentTable table = exponent_table(cells, 0.0, 3.0);
  CHECK(table.rows.front().tau_q == doctest::Approx(1.0).epsilon(0.01));
  CHECK(table.rows.front().tau_star_q == doctest::Approx(2.0).epsilon(0.01));
}

TEST_SUITE_END();
