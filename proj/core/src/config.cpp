#include "mfsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mfsim::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("config error: " + message);
}

void require_known_keys(const json& object, const std::string& where,
                        const std::set<std::string>& known) {
  for (const auto& [key, value] : object.items()) {
    if (known.find(key) == known.end()) {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

qdyn::MeasurementScheme parse_scheme(const json& node) {
  if (!node.is_object()) fail("'scheme' must be an object");
  require_known_keys(node, "scheme", {"kind", "error_rate"});
  if (!node.contains("kind")) fail("scheme needs a 'kind'");
  const std::string kind = node.at("kind").get<std::string>();
  qdyn::MeasurementScheme scheme;
  if (kind == "projective") {
    scheme.kind = qdyn::SchemeKind::Projective;
  } else if (kind == "generalized") {
    scheme.kind = qdyn::SchemeKind::Generalized;
  } else if (kind == "noclick") {
    scheme.kind = qdyn::SchemeKind::NoClick;
  } else {
    fail("unknown scheme kind '" + kind + "'");
  }
  if (node.contains("error_rate")) {
    scheme.error_rate = node.at("error_rate").get<double>();
  }
  return scheme;
}

json serialize_scheme(const qdyn::MeasurementScheme& scheme) {
  json node;
  switch (scheme.kind) {
    case qdyn::SchemeKind::Projective: node["kind"] = "projective"; break;
    case qdyn::SchemeKind::Generalized: node["kind"] = "generalized"; break;
    case qdyn::SchemeKind::NoClick: node["kind"] = "noclick"; break;
  }
  node["error_rate"] = scheme.error_rate;
  return node;
}

ensemble::RateRule parse_rate(const json& node) {
  if (!node.is_object()) fail("'rate' must be an object with 'c' or 'p'");
  require_known_keys(node, "rate", {"c", "p"});
  if (node.contains("c") == node.contains("p")) {
    fail("'rate' needs exactly one of 'c' (p = c/L) or 'p' (absolute)");
  }
  ensemble::RateRule rule;
  if (node.contains("c")) {
    rule.absolute = false;
    rule.value = node.at("c").get<double>();
  } else {
    rule.absolute = true;
    rule.value = node.at("p").get<double>();
  }
  return rule;
}

json serialize_rate(const ensemble::RateRule& rule) {
  json node;
  node[rule.absolute ? "p" : "c"] = rule.value;
  return node;
}

ensemble::TimeRule parse_time_rule(const json& node) {
  ensemble::TimeRule rule;
  if (node.is_string()) {
    if (node.get<std::string>() != "auto") fail("'time_rule' string must be \"auto\"");
    return rule;
  }
  if (!node.is_object()) fail("'time_rule' must be \"auto\" or an object");
  require_known_keys(node, "time_rule", {"mult_L", "mult_L2", "steps"});
  if (node.size() != 1) fail("'time_rule' needs exactly one of mult_L, mult_L2, steps");
  if (node.contains("mult_L")) {
    rule.kind = ensemble::TimeRule::Kind::MultipleOfL;
    rule.value = node.at("mult_L").get<double>();
  } else if (node.contains("mult_L2")) {
    rule.kind = ensemble::TimeRule::Kind::MultipleOfLSquared;
    rule.value = node.at("mult_L2").get<double>();
  } else {
    rule.kind = ensemble::TimeRule::Kind::Fixed;
    rule.value = node.at("steps").get<double>();
  }
  return rule;
}

json serialize_time_rule(const ensemble::TimeRule& rule) {
  switch (rule.kind) {
    case ensemble::TimeRule::Kind::Auto: return json("auto");
    case ensemble::TimeRule::Kind::MultipleOfL: return json{{"mult_L", rule.value}};
    case ensemble::TimeRule::Kind::MultipleOfLSquared: return json{{"mult_L2", rule.value}};
    case ensemble::TimeRule::Kind::Fixed: return json{{"steps", rule.value}};
  }
  throw std::logic_error("unreachable time rule kind");
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& error) {
    fail(std::string("invalid JSON: ") + error.what());
  }
  if (!document.is_object()) fail("top level must be an object");
  require_known_keys(document, "config",
                     {"dynamics", "scheme", "L_list", "rate", "q_grid", "l_box_list",
                      "time_rule", "n_traj", "boundary", "master_seed", "r_sites",
                      "record_recentered", "time_series", "out_dir", "fit_min_L", "fit_q0"});

  Config config;
  ensemble::ExperimentSpec& spec = config.spec;

  for (const char* key : {"dynamics", "L_list", "n_traj", "master_seed"}) {
    if (!document.contains(key)) fail(std::string("missing required key '") + key + "'");
  }

  spec.dynamics = ensemble::dynamics_from_name(document.at("dynamics").get<std::string>());
  if (document.contains("scheme")) spec.scheme = parse_scheme(document.at("scheme"));
  spec.lengths = document.at("L_list").get<std::vector<int>>();
  if (document.contains("rate")) spec.rate = parse_rate(document.at("rate"));
  if (document.contains("q_grid")) spec.q_grid = document.at("q_grid").get<std::vector<double>>();
  if (document.contains("l_box_list")) {
    spec.box_sizes = document.at("l_box_list").get<std::vector<int>>();
  }
  if (document.contains("time_rule")) spec.time_rule = parse_time_rule(document.at("time_rule"));
  spec.trajectories = document.at("n_traj").get<long>();
  if (document.contains("boundary")) {
    const std::string boundary = document.at("boundary").get<std::string>();
    if (boundary == "OBC") {
      spec.boundary = Boundary::OBC;
    } else if (boundary == "PBC") {
      spec.boundary = Boundary::PBC;
    } else {
      fail("boundary must be \"OBC\" or \"PBC\"");
    }
  }
  spec.master_seed = document.at("master_seed").get<std::uint64_t>();
  if (document.contains("r_sites")) spec.measured_sites = document.at("r_sites").get<int>();
  if (document.contains("record_recentered")) {
    spec.record_recentered = document.at("record_recentered").get<bool>();
  }
  if (document.contains("time_series")) {
    spec.record_time_series = document.at("time_series").get<bool>();
  }
  if (document.contains("out_dir")) config.out_dir = document.at("out_dir").get<std::string>();
  if (document.contains("fit_min_L")) config.fit_min_length = document.at("fit_min_L").get<int>();
  if (document.contains("fit_q0")) config.fit_q0 = document.at("fit_q0").get<double>();

  try {
    spec.validate();
  } catch (const std::invalid_argument& error) {
    fail(error.what());
  }
  return config;
}

std::string serialize_config(const Config& config) {
  const ensemble::ExperimentSpec& spec = config.spec;
  json document;
  document["dynamics"] = ensemble::dynamics_name(spec.dynamics);
  document["scheme"] = serialize_scheme(spec.scheme);
  document["L_list"] = spec.lengths;
  document["rate"] = serialize_rate(spec.rate);
  document["q_grid"] = spec.q_grid;
  document["l_box_list"] = spec.box_sizes;
  document["time_rule"] = serialize_time_rule(spec.time_rule);
  document["n_traj"] = spec.trajectories;
  document["boundary"] = spec.boundary == Boundary::OBC ? "OBC" : "PBC";
  document["master_seed"] = spec.master_seed;
  document["r_sites"] = spec.measured_sites;
  document["record_recentered"] = spec.record_recentered;
  document["time_series"] = spec.record_time_series;
  document["out_dir"] = config.out_dir;
  document["fit_min_L"] = config.fit_min_length;
  document["fit_q0"] = config.fit_q0;
  return document.dump(2);
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace mfsim::cli
