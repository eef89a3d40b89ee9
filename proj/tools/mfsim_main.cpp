#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mfsim/cli.hpp"
#include "mfsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"monitored single-particle dynamics simulator and multifractal scaling analyzer"};
  app.set_version_flag("--version", std::string(mfsim::version_string));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_override;
  CLI::App* simulate = app.add_subcommand("simulate", "run a configured trajectory ensemble");
  simulate->add_option("--config", config_path, "JSON experiment configuration")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir_override, "output directory (overrides the config)");

  mfsim::cli::AnalyticOptions analytic;
  CLI::App* analytic_cmd =
      app.add_subcommand("analytic", "print closed-form reference values over a q grid");
  analytic_cmd->add_option("model", analytic.model, "single_shot or resetting")->required();
  analytic_cmd->add_option("--L", analytic.length, "system size")->check(CLI::PositiveNumber);
  analytic_cmd->add_option("--q-min", analytic.q_min, "smallest moment order");
  analytic_cmd->add_option("--q-max", analytic.q_max, "largest moment order");
  analytic_cmd->add_option("--q-step", analytic.q_step, "moment order step");
  analytic_cmd->add_option("--r", analytic.measured_sites, "measured sites (single_shot)");
  analytic_cmd->add_option("--e", analytic.error_rate,
                           "error rate for the generalized detected-branch column");
  analytic_cmd->add_option("--csv", analytic.csv_path, "also write the table to this CSV file");

  mfsim::cli::FitOptions fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "recompute the exponent table from a stats.csv file");
  fit_cmd->add_option("stats", fit.stats_path, "stats.csv produced by simulate")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", fit.out_path, "output exponents.csv path");
  fit_cmd->add_option("--min-L", fit.min_length, "smallest system size used in fits");
  fit_cmd->add_option("--q0", fit.q0, "moment order used to estimate D_0");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return mfsim::cli::cmd_simulate(config_path, out_dir_override, std::cout, std::cerr);
  }
  if (analytic_cmd->parsed()) {
    return mfsim::cli::cmd_analytic(analytic, std::cout, std::cerr);
  }
  return mfsim::cli::cmd_fit(fit, std::cout, std::cerr);
}
