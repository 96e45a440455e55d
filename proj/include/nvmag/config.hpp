#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nvmag/dynamics.hpp"
#include "nvmag/sweeps.hpp"

namespace nvmag {

using json = nlohmann::json;

struct NoiseConfig {
  std::string model = "markovian";  // markovian | ou
  double tau_c = 0.2;               // us
  double dt = 0.002;                // us
  std::size_t n_traj = 2000;
  std::uint64_t seed = 12345;
  double t_max = 10.0;              // us, time axis for noise-compare
  std::size_t points = 50;
};

struct OutputConfig {
  std::string path = "out.csv";
  std::string format = "csv";  // csv | json
  int precision = 12;
};

/// Fully-resolved experiment configuration. Scalar fields live in `base`;
/// swept axes, when given as {min,max,points,log} objects, land in the
/// optional ranges. Frequencies are accepted in ordinary units (MHz) and
/// stored angular; times us; fields G.
struct ExperimentConfig {
  ProtocolParams base;
  std::optional<Range> tau_range;
  std::optional<Range> B_range;
  std::optional<Range> T2_range;
  TimingBudget timing = TimingBudget::c13_cryo();
  std::string timing_preset = "c13-cryo";
  NoiseConfig noise;
  OutputConfig output;

  /// Canonical JSON echo with every default resolved.
  json effective() const;
  /// FNV-1a 64-bit hash of the canonical dump.
  std::string hash() const;
};

/// Parse and validate; unknown keys anywhere are config_errors.
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);

/// Named timing/species presets exposed by the CLI.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace nvmag
