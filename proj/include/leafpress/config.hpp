#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leafpress/dynamics.hpp"
#include "leafpress/estimators.hpp"

namespace leafpress {

// One experiment, as read from a flat "key = value" config file. A run is
// fully determined by this struct (the seed included); every output file
// echoes the resolved values.
struct ExperimentConfig {
  // Model: a file path (a flat file whose required key is `matrix`) or an
  // inline matrix. The inline form wins when both are present.
  std::string model_path;
  std::vector<std::vector<std::int64_t>> matrix;

  std::string potential = "zero";

  // Leaf patch.
  std::vector<double> base{0.1, 0.2};
  double delta = 0.5;
  int K = 2048;
  std::string scheme = "uniform";  // uniform | stratified
  std::uint64_t seed = 0;

  // Estimator grids.
  IntRange n_window{3, 5};
  std::vector<double> eps_ladder{0.2, 0.1};
  std::vector<double> gamma_ladder{0.05};

  // Estimator selection and parameters. An empty `estimator` means the
  // subcommand default (pressure: spanning, entropy: partition).
  std::string estimator;
  double partition_side = 0.25;
  std::string lyap_sampler = "halton";  // halton | uniform
  int lyap_n_max = 64;
  int lyap_samples = 256;

  // Verification.
  std::string theorems = "1.1,1.3";
  double tolerance = 0.10;
  double insensitivity_tolerance = 0.05;

  // Output base name; `<out>.json`, `<out>.csv`, `<out>.report.txt` and the
  // timestamp sidecar `<out>.meta.json` are derived from it.
  std::string out = "out";

  bool seed_from_env = false;  // seed came from LEAFPRESS_SEED

  // Resolved key/value pairs in catalog order, for echoing into outputs.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// The accepted keys, in canonical order (used in error messages and echoes).
const std::vector<std::string>& config_key_catalog();

// Parses the flat format: one `key = value` per line, '#' or ';' comments,
// [a, b, c] lists, lo..hi integer ranges, [[..],[..]] integer matrices.
// Errors are reported as "<name>:<line>: message". The environment variable
// LEAFPRESS_SEED (a decimal unsigned integer) overrides the seed.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);

// Reads and parses a config file; a relative `model` path is resolved
// against the directory containing the config file.
ExperimentConfig load_config_file(const std::string& path);

// Builds the model from the inline matrix or the model file.
LinearPHModel resolve_model(const ExperimentConfig& cfg);

}  // namespace leafpress
