#pragma once

#include <string>

#include "stokeslip/analysis.hpp"

namespace stokeslip {

// Mesh input: the built-in concentric-ring disk mesh, or a Triangle-format
// file pair (snapped onto the unit circle after import).
struct MeshSource {
  bool builtin = true;
  int rings = 4;
  std::string node_path;
  std::string ele_path;
};

// Resolved experiment configuration. Defaults reproduce the baseline setup:
// P1 velocity/pressure with eta = 0.01, reduced boundary quadrature,
// eps = 0.1 h^2, the built-in disk benchmark case.
struct RunConfig {
  ElementChoice element = ElementChoice::p1(0.01);
  PenaltyScheme scheme = PenaltyScheme::Reduced;
  EpsRule eps_rule = EpsRule::prop_h2();
  MeshSource mesh;
  int levels = 4;
  SolverConfig solver;
  std::string case_name = "builtin_disk";
  std::string output_dir = "out";
};

// Strict JSON parsing: unknown keys anywhere are rejected, every value is
// type- and range-checked. Keys absent from the file keep the values of
// `base`, so subcommands can install their own defaults. Throws ConfigError.
RunConfig parse_config_json(const std::string& text, const RunConfig& base = RunConfig{});

// Reads and parses a config file. Throws IoError / ConfigError.
RunConfig load_config_file(const std::string& path, const RunConfig& base = RunConfig{});

// Canonical JSON echo of a resolved config; written as run.json next to the
// outputs so a run can be reproduced exactly.
std::string config_json(const RunConfig& cfg);

}  // namespace stokeslip
