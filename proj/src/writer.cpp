#include "nvmag/writer.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nvmag {

std::string format_value(double v, int precision) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string render_csv(const SweepResult& table, const ExperimentConfig& cfg,
                       const std::string& command) {
  std::ostringstream out;
  out << "# version: " << kVersion << "\n";
  out << "# command: " << command << "\n";
  out << "# seed: " << cfg.noise.seed << "\n";
  out << "# config_hash: " << cfg.hash() << "\n";
  out << "# config: " << cfg.effective().dump() << "\n";
  for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_value(row[c], cfg.output.precision);
    out << "\n";
  }
  return out.str();
}

std::string render_json(const SweepResult& table, const ExperimentConfig& cfg,
                        const std::string& command) {
  json meta = {{"version", kVersion},
               {"command", command},
               {"seed", cfg.noise.seed},
               {"config_hash", cfg.hash()},
               {"config", cfg.effective()}};
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    // round through the CSV formatting so both formats carry identical values
    for (double v : row)
      r.push_back(std::strtod(format_value(v, cfg.output.precision).c_str(), nullptr));
    rows.push_back(std::move(r));
  }
  json doc = {{"meta", meta}, {"columns", table.columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

void write_result(const SweepResult& table, const ExperimentConfig& cfg,
                  const std::string& command) {
  const std::string text = cfg.output.format == "json"
                               ? render_json(table, cfg, command)
                               : render_csv(table, cfg, command);
  std::ofstream out(cfg.output.path, std::ios::binary);
  if (!out) throw config_error("cannot write output file '" + cfg.output.path + "'");
  out << text;
}

}  // namespace nvmag
