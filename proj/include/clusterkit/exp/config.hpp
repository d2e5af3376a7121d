#pragma once

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterkit/params.hpp"
#include "clusterkit/topology.hpp"

namespace clusterkit {

// One experiment: a topology recipe, an algorithm with parameters, radio
// conditions, and output destinations. Parsed from a line-oriented
// `key = value` file with [section] headers; see parse_config_text below for
// the recognized keys.
struct ExperimentConfig {
  std::string algorithm = "lca";
  std::string chd, jd, it;  // used when algorithm == "custom"
  ChdParams params;
  TopologySpec topology;
  double loss = 0.0;
  bool energy_random = false;
  double energy_value = 1.0;
  bool attribute_random = false;
  std::vector<std::uint64_t> seeds;
  std::string csv_path;
  std::string plot_path;
  std::string plot_metric = "ch_count";

  std::vector<std::uint64_t> effective_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s <= 20; ++s) out.push_back(s);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw std::runtime_error("config: bad number for " + key + ": " + v);
  }
  return out;
}

inline std::uint64_t to_u64(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw std::runtime_error("config: bad integer for " + key + ": " + v);
  }
  return out;
}

inline std::vector<std::uint64_t> to_u64_list(const std::string& v,
                                              const std::string& key) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(to_u64(part, key));
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = s.substr(1, s.size() - 2);
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " is not key = value: " + s);
    }
    std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    using detail::to_double;
    using detail::to_u64;

    if (section == "topology") {
      if (key == "kind") {
        if (val == "density") cfg.topology.kind = TopologyKind::FixedDensity;
        else if (val == "diameter") cfg.topology.kind = TopologyKind::FixedDiameter;
        else if (val == "file") cfg.topology.kind = TopologyKind::FromFile;
        else throw std::runtime_error("config: unknown topology kind: " + val);
      } else if (key == "nodes") {
        cfg.topology.node_count = static_cast<std::uint32_t>(to_u64(val, key));
      } else if (key == "density") {
        cfg.topology.target_density = to_double(val, key);
      } else if (key == "side") {
        cfg.topology.world_side = to_double(val, key);
      } else if (key == "range") {
        cfg.topology.comm_range = to_double(val, key);
      } else if (key == "file") {
        cfg.topology.file = val;
      } else {
        throw std::runtime_error("config: unknown [topology] key: " + key);
      }
    } else if (section == "algorithm") {
      if (key == "name") cfg.algorithm = val;
      else if (key == "chd") cfg.chd = val;
      else if (key == "jd") cfg.jd = val;
      else if (key == "it") cfg.it = val;
      else if (key == "p") cfg.params.p = to_double(val, key);
      else if (key == "k") cfg.params.k = static_cast<unsigned>(to_u64(val, key));
      else if (key == "d") cfg.params.d = static_cast<unsigned>(to_u64(val, key));
      else if (key == "P") cfg.params.P_desired = to_double(val, key);
      else if (key == "t") cfg.params.t = static_cast<unsigned>(to_u64(val, key));
      else if (key == "e_max") cfg.params.e_max = to_double(val, key);
      else if (key == "energy") {
        if (val == "random") cfg.energy_random = true;
        else cfg.energy_value = to_double(val, key);
      } else if (key == "attribute") {
        if (val == "random") cfg.attribute_random = true;
        else if (val != "id")
          throw std::runtime_error("config: attribute must be id or random");
      } else {
        throw std::runtime_error("config: unknown [algorithm] key: " + key);
      }
    } else if (section == "radio") {
      if (key == "loss") cfg.loss = to_double(val, key);
      else throw std::runtime_error("config: unknown [radio] key: " + key);
    } else if (section == "output") {
      if (key == "csv") cfg.csv_path = val;
      else if (key == "plot") cfg.plot_path = val;
      else if (key == "plot_metric") cfg.plot_metric = val;
      else if (key == "seeds") cfg.seeds = detail::to_u64_list(val, key);
      else if (key == "seed_count") {
        cfg.seeds.clear();
        std::uint64_t n = to_u64(val, key);
        for (std::uint64_t s = 1; s <= n; ++s) cfg.seeds.push_back(s);
      } else {
        throw std::runtime_error("config: unknown [output] key: " + key);
      }
    } else {
      throw std::runtime_error("config: key outside any section: " + key);
    }
  }
  // Environment override: pin the whole run to a single seed.
  if (const char* env = std::getenv("CLUSTERKIT_SEED")) {
    cfg.seeds = {detail::to_u64(env, "CLUSTERKIT_SEED")};
  }
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace clusterkit
