#pragma once

// Scenario documents: a YAML description of one simulation run, parsed into a
// plain config struct and turned into a SimulationProblem.

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bearing/analysis.hpp"
#include "bearing/sim.hpp"

namespace bearing {

inline constexpr int kSchemaVersion = 1;

struct InitialGainPolicy {
  enum class Kind { Constant, List, Uniform };
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::vector<double> values;
  double low = 0.0;
  double high = 0.0;
};

struct SegmentConfig {
  double from = 0.0;
  double to = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  std::string profile = "zero";  // zero | harmonic | constant | table
  std::vector<double> constant;
  std::vector<double> times;
  std::vector<std::vector<double>> table;
};

struct ScheduleConfig {
  std::string selector = "list";  // followers | all | list
  std::vector<int> agents;        // 0-based, used when selector is "list"
  std::vector<SegmentConfig> segments;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name;
  int dim = 3;

  // formation: either a preset or an explicit graph plus target
  std::string preset;  // "", "dodecahedron", "k4_square"
  double scale = 1.0;
  int agents = 0;
  int leaders = 0;
  std::vector<Edge> edges;  // 0-based
  std::vector<std::vector<double>> target_positions;
  std::vector<std::vector<double>> target_leaders;
  std::vector<std::vector<double>> target_bearings;

  std::string law = "disp_adaptive";
  double kappa = 1.0;
  std::vector<double> kappa_list;  // per-follower rates
  double kp = 0.5;
  double alpha = 0.05;
  int order = 1;
  InitialGainPolicy initial_gain;

  std::vector<ScheduleConfig> disturbance;

  std::string leader_velocity = "none";  // none | weaving | table
  std::vector<double> velocity_times;
  std::vector<std::vector<double>> velocity_values;
  std::string leader_mode = "kinematic";  // kinematic | tracking
  double leader_kp = 1.0;
  double leader_beta1 = 1.0;

  double dt = 1e-3;
  std::string scheme = "euler";
  std::string sign = "exact";  // exact | smoothed:<eps>
  double collision_threshold = kCoincidenceTol;
  double horizon = 10.0;
  int stride = 10;

  double perturbation = 0.0;
  std::uint64_t seed = 1;
  std::vector<std::vector<double>> initial_positions;

  BoundOptions analysis;
};

/// Parses and schema-checks a scenario. Throws Error(ConfigError) with a
/// field path such as "controller.kappa: expected a number".
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// Parses "exact" or "smoothed:<eps>".
SignMode parse_sign(const std::string& text);

/// Builds the formation, law, gains, disturbances and initial state.
/// Domain errors (BadLeaderCount, InvalidGraph, NotUniquelyLocalizable, ...)
/// keep their kind; messages are prefixed with the offending section.
SimulationProblem build_problem(const ScenarioConfig& config);

struct ValidationReport {
  int agents = 0;
  int leaders = 0;
  int edges = 0;
  RigidityReport rigidity;
  double lambda_min_ff = 0.0;
  Index gain_count = 0;
};
ValidationReport validate(const ScenarioConfig& config);

/// Canonical JSON of every semantic field (defaults filled in).
std::string canonical_json(const ScenarioConfig& config);
/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace bearing
