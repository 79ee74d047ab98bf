#pragma once

// Parameter sweeps: one scenario run per cell of a Cartesian grid.

#include <string>
#include <vector>

#include "bearing/scenario.hpp"

namespace bearing {

struct SweepAxis {
  std::string name;  // kappa, kp, alpha, dt, horizon, perturbation, seed, epsilon
  std::vector<double> values;
};

/// "kappa=0.1,0.2;dt=1e-3,5e-4". An empty string yields no axes.
std::vector<SweepAxis> parse_grid(const std::string& spec);

/// Sets one named parameter on a copy of the config. Throws ConfigError for
/// unknown names. `epsilon` switches the sign to smoothed:<value>.
ScenarioConfig with_parameter(ScenarioConfig config, const std::string& name, double value);

struct SweepRow {
  std::vector<double> parameters;  // one per axis
  bool ok = false;
  std::string error;  // error kind when the cell failed
  double final_delta = 0.0;
  double max_gain = 0.0;
  double convergence_time = 0.0;  // NaN when the final error is above threshold
};

/// Runs every grid cell, `workers` at a time. No axes means no cells; a
/// failing cell is recorded and the sweep continues.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                                unsigned workers = 0, double threshold = 0.05);

/// Time after which ‖δ‖ stays below `threshold` for the rest of the trace.
double convergence_time(const SimulationTrace& trace, double threshold);

std::string sweep_table(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows);

}  // namespace bearing
