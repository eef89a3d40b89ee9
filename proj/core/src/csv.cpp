#include "mfsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfsim::csv {

namespace {

constexpr const char* stats_header =
    "dynamics,scheme,L,p,q,l_box,mean_ipr,mean_ipr_stderr,typical_ipr,typical_ipr_stderr,"
    "mean_var,mean_var_stderr,n_traj";

constexpr const char* exponents_header =
    "q,l_box,tau_q,tau_q_stderr,tau_star_q,tau_star_q_stderr,D_q,Delta_q,D0,tau_var";

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double_field(const std::string& field, std::size_t line_number,
                          const std::string& column) {
  if (field == "nan" || field == "-nan") return std::nan("");
  if (field == "inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument("stats.csv line " + std::to_string(line_number) +
                                ": bad number '" + field + "' in column " + column);
  }
  return value;
}

long parse_long_field(const std::string& field, std::size_t line_number,
                      const std::string& column) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument("stats.csv line " + std::to_string(line_number) +
                                ": bad integer '" + field + "' in column " + column);
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void write_stats(const std::string& path, const LabeledStats& stats) {
  std::ofstream out = open_for_write(path);
  out << stats_header << "\n";
  for (const ensemble::StatsRow& row : stats.rows) {
    out << stats.dynamics << ',' << stats.scheme << ',' << row.length << ','
        << format_double(row.rate) << ',' << format_double(row.q) << ',' << row.box_size << ','
        << format_double(row.mean_ipr) << ',' << format_double(row.mean_ipr_stderr) << ','
        << format_double(row.typical_ipr) << ',' << format_double(row.typical_ipr_stderr) << ','
        << format_double(row.mean_var) << ',' << format_double(row.mean_var_stderr) << ','
        << row.n_traj << "\n";
  }
}

LabeledStats read_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open stats file '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("stats file '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != stats_header) {
    throw std::invalid_argument("stats.csv line 1: header does not match the documented schema");
  }
  LabeledStats stats;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != 13) {
      throw std::invalid_argument("stats.csv line " + std::to_string(line_number) + ": expected 13 fields, got " +
                                  std::to_string(fields.size()));
    }
    if (stats.rows.empty()) {
      stats.dynamics = fields[0];
      stats.scheme = fields[1];
    }
    ensemble::StatsRow row;
    row.length = static_cast<int>(parse_long_field(fields[2], line_number, "L"));
    row.rate = parse_double_field(fields[3], line_number, "p");
    row.q = parse_double_field(fields[4], line_number, "q");
    row.box_size = static_cast<int>(parse_long_field(fields[5], line_number, "l_box"));
    row.mean_ipr = parse_double_field(fields[6], line_number, "mean_ipr");
    row.mean_ipr_stderr = parse_double_field(fields[7], line_number, "mean_ipr_stderr");
    row.typical_ipr = parse_double_field(fields[8], line_number, "typical_ipr");
    row.typical_ipr_stderr = parse_double_field(fields[9], line_number, "typical_ipr_stderr");
    row.mean_var = parse_double_field(fields[10], line_number, "mean_var");
    row.mean_var_stderr = parse_double_field(fields[11], line_number, "mean_var_stderr");
    row.n_traj = parse_long_field(fields[12], line_number, "n_traj");
    stats.rows.push_back(row);
  }
  return stats;
}

void write_exponents(const std::string& path, const scaling::ExponentTable& table) {
  std::ofstream out = open_for_write(path);
  out << exponents_header << "\n";
  for (const scaling::ExponentRow& row : table.rows) {
    out << format_double(row.q) << ',' << row.box_size << ',' << format_double(row.tau_q) << ','
        << format_double(row.tau_q_stderr) << ',' << format_double(row.tau_star_q) << ','
        << format_double(row.tau_star_q_stderr) << ',' << format_double(row.fractal_dim) << ','
        << format_double(row.anomalous_dim) << ','
        << format_double(table.d0_by_box.at(row.box_size)) << ','
        << format_double(table.tau_var) << "\n";
  }
}

void write_recentered(const std::string& path, const ensemble::RunResult& result) {
  std::ofstream out = open_for_write(path);
  out << "L,index,mean_p\n";
  for (const auto& [length, mean] : result.recentered_mean) {
    // Position k holds relative index k for k <= L/2, k - L beyond.
    for (int index = -length / 2 + 1; index <= length / 2; ++index) {
      const int position = (index + length) % length;
      out << length << ',' << index << ','
          << format_double(mean[static_cast<std::size_t>(position)]) << "\n";
    }
  }
}

void write_time_series(const std::string& path, const ensemble::RunResult& result) {
  std::ofstream out = open_for_write(path);
  out << "L,t,mean_ipr2,mean_ipr2_stderr,mean_var,mean_var_stderr,n\n";
  for (const auto& [length, series] : result.time_series) {
    for (const ensemble::TimePoint& point : series) {
      out << length << ',' << point.t << ',' << format_double(point.mean_ipr2) << ','
          << format_double(point.mean_ipr2_stderr) << ',' << format_double(point.mean_var) << ','
          << format_double(point.mean_var_stderr) << ',' << point.n << "\n";
    }
  }
}

}  // namespace mfsim::csv
