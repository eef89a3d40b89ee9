#pragma once

#include <string>

#include "mfsim/ensemble.hpp"

namespace mfsim::cli {

/// Experiment configuration document: the experiment spec plus output
/// controls. Parsing is strict: unknown keys are fatal.
struct Config {
  ensemble::ExperimentSpec spec;
  std::string out_dir = ".";
  int fit_min_length = 128;
  double fit_q0 = 0.01;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Parses a JSON config document; throws std::invalid_argument with a
/// descriptive message on unknown keys, bad types, or bad values.
Config parse_config(const std::string& json_text);

/// Full-echo serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const Config& config);

Config load_config_file(const std::string& path);

}  // namespace mfsim::cli
