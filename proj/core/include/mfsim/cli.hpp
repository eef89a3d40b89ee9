#pragma once

#include <iosfwd>
#include <string>

#include "mfsim/config.hpp"

namespace mfsim::cli {

/// Runs the configured ensemble and writes stats.csv, exponents.csv,
/// run.json, recentered_dist.csv and (when enabled) time_series.csv into
/// the output directory. Returns the process exit code.
int cmd_simulate(const std::string& config_path, const std::string& out_dir_override,
                 std::ostream& out, std::ostream& err);

struct AnalyticOptions {
  std::string model;  // "single_shot" or "resetting"
  int length = 100;
  double q_min = 0.25;
  double q_max = 4.0;
  double q_step = 0.25;
  int measured_sites = 1;
  double error_rate = 0.0;  // > 0 adds the generalized detected-branch IPR
  std::string csv_path;     // optional CSV copy of the table
};

/// Prints closed-form values over a q grid.
int cmd_analytic(const AnalyticOptions& options, std::ostream& out, std::ostream& err);

struct FitOptions {
  std::string stats_path;
  std::string out_path = "exponents.csv";
  int min_length = 128;
  double q0 = 0.01;
};

/// Recomputes the exponent table from a stats.csv file.
int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mfsim::cli
