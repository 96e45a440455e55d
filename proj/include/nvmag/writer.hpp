#pragma once

#include "nvmag/config.hpp"

namespace nvmag {

inline constexpr const char* kVersion = "0.1.0";

/// Self-describing artifact renderers. Both formats carry the same metadata
/// (version, command, seed, effective config and its hash) and format every
/// value with %.<precision>g so reruns are byte-identical.
std::string render_csv(const SweepResult& table, const ExperimentConfig& cfg,
                       const std::string& command);
std::string render_json(const SweepResult& table, const ExperimentConfig& cfg,
                        const std::string& command);

/// Renders per cfg.output.format and writes cfg.output.path.
void write_result(const SweepResult& table, const ExperimentConfig& cfg,
                  const std::string& command);

std::string format_value(double v, int precision);

}  // namespace nvmag
