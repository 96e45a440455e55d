#pragma once

#include <map>
#include <string>
#include <vector>

#include "nvmag/metrology.hpp"

namespace nvmag {

/// Axis range; grid() materializes a linear or logarithmic grid.
struct Range {
  double min;
  double max;
  std::size_t points;
  bool log_scale = false;

  void validate() const;
  std::vector<double> grid() const;
};

struct OptimizerSettings {
  std::size_t coarse_points = 500;  // >= 400
  int refinements = 2;              // golden-section passes
  double ps_floor = 1e-3;           // exclude near-singular cells
  void validate() const;
};

enum class ProtocolKind { PostSelection, Ramsey };

struct TauOptimum {
  double tau_star;
  double eta_star;
};

/// Coarse grid scan followed by golden-section refinement of eta(tau).
/// Deterministic; throws numeric_error if every grid point is insensitive.
TauOptimum optimize_tau(const ProtocolParams& p, const TimingBudget& timing,
                        const Range& range, ProtocolKind kind,
                        const OptimizerSettings& opt = {});

struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;
};

/// Per-T2* optimized sensitivities: Ramsey, 13C and 15N post-selection.
/// tau is searched over (0, 5*T2*] for each cell.
SweepResult sweep_T2star(const Range& t2_range, double B,
                         const OptimizerSettings& opt = {});

/// eta_post/eta_Ramsey over a (T2*, B) grid, 15N configuration, each cell
/// carrying its own optimized tau for both protocols.
SweepResult ratio_map(const Range& t2_range, const Range& b_range,
                      const OptimizerSettings& opt = {});

/// eta(B) at fixed tau for the post-selection protocol (flat-field study).
SweepResult sweep_B_fixed_tau(const Range& b_range, double tau,
                              const ProtocolParams& base,
                              const TimingBudget& timing);

/// Fisher information curves on a tau grid at the given T2*.
SweepResult fisher_vs_time(const Range& tau_range, const ProtocolParams& base);

}  // namespace nvmag
