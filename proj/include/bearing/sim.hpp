#pragma once

// Fixed-step integration of the closed loop ṗ = u + d together with the
// adaptive-gain ODEs. Positions, gains and the accumulated leader offset form
// one coupled state advanced by the same scheme and step.

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bearing/controllers.hpp"
#include "bearing/disturbance.hpp"
#include "bearing/target.hpp"

namespace bearing {

struct NoLeaderMotion {};
/// v*(t) = [sin(t/2), 1, 0]ᵀ.
struct WeavingLeaderVelocity {};
/// Sampled velocity table, linearly interpolated, held beyond its ends.
struct LeaderVelocityTable {
  std::vector<double> times;
  Eigen::MatrixXd values;  // rows = samples, cols = d
};

using LeaderVelocity = std::variant<NoLeaderMotion, WeavingLeaderVelocity, LeaderVelocityTable>;

Eigen::VectorXd leader_velocity(const LeaderVelocity& v, int dim, double t);
/// sup_t ‖v*(t)‖_∞ (analytic for the preset, table maximum otherwise).
double leader_velocity_sup_norm(const LeaderVelocity& v, int dim);
bool is_moving(const LeaderVelocity& v);

/// Leaders either follow p*(t) exactly, or run the position-tracking law
/// against p*(t) while subject to their own disturbance.
struct KinematicLeaders {};
struct TrackingLawLeaders {
  double kp = 1.0;
  double beta1 = 1.0;
};
using LeaderMode = std::variant<KinematicLeaders, TrackingLawLeaders>;

enum class Scheme { ForwardEuler, RK4 };

struct IntegratorSettings {
  double dt = 1e-3;
  Scheme scheme = Scheme::ForwardEuler;
  SignMode sign = {};
  double collision_threshold = kCoincidenceTol;
  double horizon = 10.0;
  int stride = 10;  // record every `stride` steps
};

/// State-dependent disturbance hook: (t, p) -> stacked d. Overrides the
/// time-only schedule when set.
using DisturbanceField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct SimulationProblem {
  TargetFormation target;
  ControlLaw law;
  Eigen::VectorXd initial_positions;
  Eigen::VectorXd initial_gains;
  DisturbanceSpec disturbance;
  DisturbanceField disturbance_field;
  LeaderVelocity leader_velocity = NoLeaderMotion{};
  LeaderMode leader_mode = KinematicLeaders{};
  IntegratorSettings settings;
};

struct SimState {
  double t = 0.0;
  Eigen::VectorXd positions;
  Eigen::VectorXd gains;
  Eigen::VectorXd target_offset;  // ∫ v* dt
};

SimState initial_state(const SimulationProblem& problem);

/// p*(t) = p*(0) + 1_n ⊗ offset.
Eigen::VectorXd moving_target(const TargetFormation& target, const Eigen::VectorXd& offset);

/// Everything evaluated at a state: the control law output, the disturbance
/// and the resulting derivative of the coupled state.
struct StepEvaluation {
  ControlOutput control;  // u includes leader inputs when they run a tracking law
  Eigen::VectorXd disturbance;
  Eigen::VectorXd velocity;  // ṗ
};

StepEvaluation evaluate_state(const SimulationProblem& problem, const SimState& state);

/// Advances one dt. Throws CollisionDetected or NonFiniteState.
SimState step(const SimulationProblem& problem, const SimState& state);

struct SampleMetrics {
  double delta_norm = 0.0;
  double bearing_err = 0.0;
  double u_norm = 0.0;
  double min_dist = 0.0;
  double d_norm = 0.0;
};

struct SimulationTrace {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> positions;
  std::vector<Eigen::VectorXd> gains;
  std::vector<Eigen::VectorXd> controls;
  std::vector<Eigen::VectorXd> disturbances;
  std::vector<SampleMetrics> metrics;

  std::size_t size() const noexcept { return times.size(); }
};

struct RunFailure {
  ErrorKind kind;
  double t;
  std::string message;
};

struct RunResult {
  SimulationTrace trace;
  SimState final_state;
  std::optional<RunFailure> failure;
  bool ok() const noexcept { return !failure.has_value(); }
};

/// Called once per step with the pre-step state and its evaluation.
using StepObserver = std::function<void(const SimState&, const StepEvaluation&)>;

SampleMetrics sample_metrics(const SimulationProblem& problem, const SimState& state,
                             const StepEvaluation& eval);

/// Integrates to the horizon (or first failure), recording every `stride`
/// steps plus the final state. Deterministic in its inputs.
RunResult run(const SimulationProblem& problem, const StepObserver& observer = {});

}  // namespace bearing
