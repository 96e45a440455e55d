#pragma once

#include "nvmag/config.hpp"

namespace nvmag {

/// Library-level command implementations; the CLI binary only parses flags,
/// calls one of these and writes the result. eta columns are reported in
/// nT Hz^-1/2, field inputs in G (stated in the header metadata).
SweepResult cmd_signal(const ExperimentConfig& cfg);
SweepResult cmd_sensitivity(const ExperimentConfig& cfg);
SweepResult cmd_noise_compare(const ExperimentConfig& cfg);
SweepResult cmd_fisher(const ExperimentConfig& cfg);
SweepResult cmd_ratio_map(const ExperimentConfig& cfg);
SweepResult cmd_sweep_b(const ExperimentConfig& cfg);

SweepResult run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace nvmag
