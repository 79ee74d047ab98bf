// Command-line front end: validate, simulate, bounds, sweep.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "json.hpp"

#include "bearing/output.hpp"
#include "bearing/scenario.hpp"
#include "bearing/sweep.hpp"

namespace fs = std::filesystem;
using namespace bearing;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCollision = 3;
constexpr int kExitDivergence = 4;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::string> sign;
  std::optional<int> stride;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "initial-state and gain seed");
  cmd->add_option("--dt", o.dt, "integration step");
  cmd->add_option("--horizon", o.horizon, "final time");
  cmd->add_option("--sign", o.sign, "exact or smoothed:<eps>");
  cmd->add_option("--stride", o.stride, "record every N steps");
}

ScenarioConfig load(const std::string& file, const Overrides& o) {
  ScenarioConfig c = load_scenario(file);
  if (o.seed) c.seed = *o.seed;
  if (o.dt) {
    if (!(*o.dt > 0.0)) throw Error(ErrorKind::ConfigError, "--dt: must be positive");
    c.dt = *o.dt;
  }
  if (o.horizon) {
    if (!(*o.horizon > 0.0)) throw Error(ErrorKind::ConfigError, "--horizon: must be positive");
    c.horizon = *o.horizon;
  }
  if (o.sign) {
    parse_sign(*o.sign);
    c.sign = *o.sign;
  }
  if (o.stride) {
    if (*o.stride < 1) throw Error(ErrorKind::ConfigError, "--stride: must be at least 1");
    c.stride = *o.stride;
  }
  return c;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CollisionDetected:
      return kExitCollision;
    case ErrorKind::NonFiniteState:
      return kExitDivergence;
    default:
      return kExitConfig;
  }
}

int report_error(ErrorKind kind, const std::string& message) {
  nlohmann::json j = {{"error", std::string(to_string(kind))}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return exit_code(kind);
}

int cmd_validate(const std::string& file, const Overrides& o) {
  const ScenarioConfig c = load(file, o);
  const ValidationReport r = validate(c);
  nlohmann::json j = {{"valid", true},
                      {"agents", r.agents},
                      {"leaders", r.leaders},
                      {"edges", r.edges},
                      {"rank", r.rigidity.rank},
                      {"expected_rank", r.rigidity.expected_rank},
                      {"infinitesimally_rigid", r.rigidity.rigid},
                      {"lambda_min_ff", r.lambda_min_ff},
                      {"gains", r.gain_count},
                      {"config_hash", config_hash(c)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& file, const Overrides& o, const fs::path& out) {
  const ScenarioConfig c = load(file, o);
  const SimulationProblem problem = build_problem(c);
  fs::create_directories(out);
  const BoundReport bounds = compute_bounds(problem, c.analysis);
  const RunResult result = run(problem);

  const std::string csv = trace_csv(problem, result.trace);
  write_atomic(out / "trace.csv", csv);
  write_atomic(out / "bounds.json", bounds_json(bounds));
  nlohmann::json manifest = {
      {"artifact_version", kArtifactVersion},
      {"trace_schema_version", kTraceSchemaVersion},
      {"scenario", c.name},
      {"config_hash", config_hash(c)},
      {"seed", c.seed},
      {"dt", c.dt},
      {"horizon", c.horizon},
      {"sign", c.sign},
      {"samples", result.trace.size()},
      {"trace_hash", fnv1a_hex(csv)},
      {"status", result.ok() ? "ok" : std::string(to_string(result.failure->kind))},
  };
  if (!result.ok())
    manifest["failure"] = {{"t", result.failure->t}, {"message", result.failure->message}};
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");

  if (!result.ok()) return report_error(result.failure->kind, result.failure->message);
  const SampleMetrics& last = result.trace.metrics.back();
  std::cout << c.name << ": t=" << format_double(result.final_state.t)
            << " delta_norm=" << format_double(last.delta_norm)
            << " bearing_err=" << format_double(last.bearing_err) << "\n";
  return 0;
}

int cmd_bounds(const std::string& file, const Overrides& o, const std::optional<fs::path>& out) {
  const ScenarioConfig c = load(file, o);
  const std::string json = bounds_json(compute_bounds(build_problem(c), c.analysis));
  if (out) write_atomic(*out, json);
  std::cout << json;
  return 0;
}

int cmd_sweep(const std::string& file, const Overrides& o, const std::string& grid,
              unsigned workers, double threshold, const std::optional<fs::path>& out) {
  const ScenarioConfig c = load(file, o);
  build_problem(c);
  const auto axes = parse_grid(grid);
  const std::string table = sweep_table(axes, run_sweep(c, axes, workers, threshold));
  if (out) write_atomic(*out, table);
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-constrained leader-follower formation simulator"};
  app.require_subcommand(1);

  std::string file;
  Overrides o;
  std::string out_dir = "out";
  std::string out_file;
  std::string grid;
  unsigned workers = 0;
  double threshold = 0.05;

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario and report its rigidity");
  validate_cmd->add_option("scenario", file)->required();
  add_overrides(validate_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "run a scenario and write its trace");
  simulate_cmd->add_option("scenario", file)->required();
  simulate_cmd->add_option("--out", out_dir, "output directory");
  add_overrides(simulate_cmd, o);

  auto* bounds_cmd = app.add_subcommand("bounds", "print the analytical bounds for a scenario");
  bounds_cmd->add_option("scenario", file)->required();
  bounds_cmd->add_option("--out", out_file, "also write the JSON here");
  add_overrides(bounds_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over a parameter grid");
  sweep_cmd->add_option("scenario", file)->required();
  sweep_cmd->add_option("--grid", grid, "e.g. kappa=0.1,0.2;dt=1e-3,5e-4");
  sweep_cmd->add_option("--workers", workers, "parallel runs (0 = all cores)");
  sweep_cmd->add_option("--threshold", threshold, "convergence threshold on the formation error");
  sweep_cmd->add_option("--out", out_file, "also write the table here");
  add_overrides(sweep_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto optional_out = out_file.empty() ? std::nullopt : std::optional<fs::path>(out_file);
  try {
    if (*validate_cmd) return cmd_validate(file, o);
    if (*simulate_cmd) return cmd_simulate(file, o, out_dir);
    if (*bounds_cmd) return cmd_bounds(file, o, optional_out);
    return cmd_sweep(file, o, grid, workers, threshold, optional_out);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const fs::filesystem_error& e) {
    std::cerr << nlohmann::json{{"error", "IoError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
