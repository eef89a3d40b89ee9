#pragma once

#include <string>
#include <vector>

#include "mfsim/ensemble.hpp"
#include "mfsim/scaling.hpp"

namespace mfsim::csv {

/// Shortest-exact decimal form of a double (17 significant digits are
/// enough to round-trip); "nan"/"inf" spelled literally.
std::string format_double(double x);

struct LabeledStats {
  std::string dynamics;
  std::string scheme;
  std::vector<ensemble::StatsRow> rows;
};

void write_stats(const std::string& path, const LabeledStats& stats);

/// Reads stats.csv back; throws std::invalid_argument naming the offending
/// row on any schema violation.
LabeledStats read_stats(const std::string& path);

void write_exponents(const std::string& path, const scaling::ExponentTable& table);

void write_recentered(const std::string& path, const ensemble::RunResult& result);

void write_time_series(const std::string& path, const ensemble::RunResult& result);

}  // namespace mfsim::csv
