#include "mfsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "mfsim/analytic.hpp"
#include "mfsim/csv.hpp"
#include "mfsim/version.hpp"

namespace mfsim::cli {

namespace {

std::string scheme_label(const ensemble::ExperimentSpec& spec) {
  switch (spec.dynamics) {
    case ensemble::Dynamics::QuantumHaar:
    case ensemble::Dynamics::QuantumFixed:
      switch (spec.scheme.kind) {
        case qdyn::SchemeKind::Projective: return "projective";
        case qdyn::SchemeKind::Generalized:
          return "generalized(e=" + csv::format_double(spec.scheme.error_rate) + ")";
        case qdyn::SchemeKind::NoClick: return "noclick";
      }
      return "projective";
    case ensemble::Dynamics::ClassicalRandom:
    case ensemble::Dynamics::ClassicalFixed:
    case ensemble::Dynamics::SingleShot:
      return "projective";
    case ensemble::Dynamics::ResetWalk:
      return "none";
  }
  return "projective";
}

std::string table_cell(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%-14.6g", value);
  return buffer;
}

std::vector<double> build_q_grid(const AnalyticOptions& options) {
  if (!(options.q_min > 0.0) || !(options.q_step > 0.0) || options.q_max < options.q_min) {
    throw std::invalid_argument("invalid q range: need 0 < q-min <= q-max and q-step > 0");
  }
  std::vector<double> grid;
  for (double q = options.q_min; q <= options.q_max + 1e-9; q += options.q_step) {
    grid.push_back(q);
  }
  return grid;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_dir_override,
                 std::ostream& out, std::ostream& err) {
  try {
    Config config = load_config_file(config_path);
    if (!out_dir_override.empty()) {
      config.out_dir = out_dir_override;
    }
    std::filesystem::create_directories(config.out_dir);
    const auto file = [&](const char* name) {
      return (std::filesystem::path(config.out_dir) / name).string();
    };

    const ensemble::RunResult result = ensemble::run(config.spec);

    csv::LabeledStats labeled;
    labeled.dynamics = ensemble::dynamics_name(config.spec.dynamics);
    labeled.scheme = scheme_label(config.spec);
    labeled.rows = result.rows;
    csv::write_stats(file("stats.csv"), labeled);

    try {
      const scaling::ExponentTable table = scaling::exponent_table(
          ensemble::to_cells(result.rows), config.fit_min_length, config.fit_q0);
      csv::write_exponents(file("exponents.csv"), table);
    } catch (const std::invalid_argument& error) {
      // Not enough system sizes to fit; keep the schema present regardless.
      csv::write_exponents(file("exponents.csv"), scaling::ExponentTable{});
      err << "mfsim: exponents not fitted: " << error.what() << "\n";
    }

    if (config.spec.record_recentered) {
      csv::write_recentered(file("recentered_dist.csv"), result);
    }
    if (config.spec.record_time_series) {
      csv::write_time_series(file("time_series.csv"), result);
    }

    nlohmann::json metadata;
    metadata["config"] = nlohmann::json::parse(serialize_config(config));
    metadata["master_seed"] = config.spec.master_seed;
    metadata["version"] = version_string;
    metadata["wall_time_seconds"] = result.wall_seconds;
    metadata["workers"] = result.workers_used;
    std::ofstream json_out(file("run.json"), std::ios::binary);
    json_out << metadata.dump(2) << "\n";

    out << "wrote " << result.rows.size() << " stats rows to " << config.out_dir << " in "
        << result.wall_seconds << " s\n";
    return 0;
  } catch (const std::exception& error) {
    err << "mfsim simulate: " << error.what() << "\n";
    return 1;
  }
}

int cmd_analytic(const AnalyticOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<double> grid = build_q_grid(options);
    std::ofstream csv_out;
    const bool with_csv = !options.csv_path.empty();
    if (with_csv) {
      csv_out.open(options.csv_path, std::ios::binary);
      if (!csv_out) {
        throw std::runtime_error("cannot open '" + options.csv_path + "' for writing");
      }
    }

    if (options.model == "single_shot") {
      const bool with_error = options.error_rate > 0.0;
      out << "single-shot measurement of r = " << options.measured_sites
          << " sites on the uniform state, L = " << options.length << "\n";
      out << "q             mean_ipr      mean_ln_ipr   typical_ipr   tau_q         tau_star_q  ";
      if (with_error) out << "  detected_ipr(e=" << options.error_rate << ")";
      out << "\n";
      if (with_csv) {
        csv_out << "q,mean_ipr,mean_ln_ipr,typical_ipr,tau_q,tau_star_q";
        if (with_error) csv_out << ",detected_ipr";
        csv_out << "\n";
      }
      for (double q : grid) {
        const double mean = analytic::single_shot_mean_ipr(options.length, q,
                                                           options.measured_sites);
        const double mean_ln = analytic::single_shot_typical_ln_ipr(options.length, q,
                                                                    options.measured_sites);
        const auto exps = analytic::single_shot_exponents(q);
        out << table_cell(q) << table_cell(mean) << table_cell(mean_ln)
            << table_cell(std::exp(mean_ln)) << table_cell(exps.tau_q)
            << table_cell(exps.tau_star_q);
        if (with_error) {
          out << table_cell(
              analytic::generalized_single_shot_ipr(options.length, q, options.error_rate));
        }
        out << "\n";
        if (with_csv) {
          csv_out << csv::format_double(q) << ',' << csv::format_double(mean) << ','
                  << csv::format_double(mean_ln) << ',' << csv::format_double(std::exp(mean_ln))
                  << ',' << csv::format_double(exps.tau_q) << ','
                  << csv::format_double(exps.tau_star_q);
          if (with_error) {
            csv_out << ',' << csv::format_double(analytic::generalized_single_shot_ipr(
                                 options.length, q, options.error_rate));
          }
          csv_out << "\n";
        }
      }
      return 0;
    }

    if (options.model == "resetting") {
      out << "random walk under Poissonian resetting, lambda = 1/L, L = " << options.length
          << "\n";
      out << "q             mean_ipr      typical_ipr   tau_q         tau_star_q    variance\n";
      if (with_csv) csv_out << "q,mean_ipr,typical_ipr,tau_q,tau_star_q,variance\n";
      for (double q : grid) {
        const double typical = analytic::resetting_typical_ipr(options.length, q);
        const double tau = 0.5 * (q - 1.0);
        const double variance = analytic::resetting_variance(options.length);
        std::string mean_text;
        std::string mean_csv;
        if (q < 3.0) {
          const double mean = analytic::resetting_mean_ipr(options.length, q);
          mean_text = table_cell(mean);
          mean_csv = csv::format_double(mean);
        } else {
          mean_text = "divergent time integral  ";
          mean_csv = "nan";
        }
        out << table_cell(q) << mean_text << table_cell(typical) << table_cell(tau)
            << table_cell(tau) << table_cell(variance) << "\n";
        if (with_csv) {
          csv_out << csv::format_double(q) << ',' << mean_csv << ','
                  << csv::format_double(typical) << ',' << csv::format_double(tau) << ','
                  << csv::format_double(tau) << ',' << csv::format_double(variance) << "\n";
        }
      }
      return 0;
    }

    throw std::invalid_argument("unknown model '" + options.model +
                                "'; expected single_shot or resetting");
  } catch (const std::exception& error) {
    err << "mfsim analytic: " << error.what() << "\n";
    return 1;
  }
}

int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const csv::LabeledStats stats = csv::read_stats(options.stats_path);
    if (stats.rows.empty()) {
      throw std::invalid_argument("stats file contains no data rows");
    }
    const scaling::ExponentTable table = scaling::exponent_table(
        ensemble::to_cells(stats.rows), options.min_length, options.q0);
    csv::write_exponents(options.out_path, table);
    out << "wrote " << table.rows.size() << " exponent rows to " << options.out_path << "\n";
    return 0;
  } catch (const std::exception& error) {
    err << "mfsim fit: " << error.what() << "\n";
    return 1;
  }
}

}  // namespace mfsim::cli
