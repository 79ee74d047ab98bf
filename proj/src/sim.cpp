#include "bearing/sim.hpp"

#include <cmath>
#include <string>

namespace bearing {

Eigen::VectorXd leader_velocity(const LeaderVelocity& v, int dim, double t) {
  struct {
    int dim;
    double t;
    Eigen::VectorXd operator()(const NoLeaderMotion&) const { return Eigen::VectorXd::Zero(dim); }
    Eigen::VectorXd operator()(const WeavingLeaderVelocity&) const {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
      out(0) = std::sin(t / 2.0);
      out(1) = 1.0;
      return out;
    }
    Eigen::VectorXd operator()(const LeaderVelocityTable& tab) const {
      return interpolate_rows(tab.times, tab.values, t);
    }
  } visitor{dim, t};
  return std::visit(visitor, v);
}

double leader_velocity_sup_norm(const LeaderVelocity& v, int /*dim*/) {
  if (std::holds_alternative<WeavingLeaderVelocity>(v)) return 1.0;
  if (const auto* tab = std::get_if<LeaderVelocityTable>(&v))
    return tab->values.size() ? tab->values.cwiseAbs().maxCoeff() : 0.0;
  return 0.0;
}

bool is_moving(const LeaderVelocity& v) { return !std::holds_alternative<NoLeaderMotion>(v); }

Eigen::VectorXd moving_target(const TargetFormation& target, const Eigen::VectorXd& offset) {
  return target.full() + offset.replicate(target.graph().vertex_count(), 1);
}

SimState initial_state(const SimulationProblem& problem) {
  const TargetFormation& target = problem.target;
  const Index dn = static_cast<Index>(target.graph().vertex_count()) * target.dim();
  if (problem.initial_positions.size() != dn)
    throw Error(ErrorKind::DimensionMismatch, "initial positions have wrong length");
  if (problem.initial_gains.size() != gain_size(problem.law, target.graph()))
    throw Error(ErrorKind::DimensionMismatch, "initial gains have wrong length");
  if ((problem.initial_gains.array() < 0.0).any())
    throw Error(ErrorKind::ConfigError, "initial gains must be nonnegative");
  return {0.0, problem.initial_positions, problem.initial_gains,
          Eigen::VectorXd::Zero(target.dim())};
}

namespace {

void check_collision(const SimulationProblem& problem, const SimState& state) {
  const double dmin = min_pairwise_distance(state.positions, problem.target.dim());
  if (dmin < problem.settings.collision_threshold)
    throw Error(ErrorKind::CollisionDetected,
                "minimum inter-agent distance " + std::to_string(dmin) + " at t = " +
                    std::to_string(state.t));
}

struct Derivative {
  Eigen::VectorXd positions;
  Eigen::VectorXd gains;
  Eigen::VectorXd offset;
};

Derivative derivative_of(const SimulationProblem& problem, const StepEvaluation& eval,
                         double t) {
  return {eval.velocity, eval.control.gain_derivative,
          leader_velocity(problem.leader_velocity, problem.target.dim(), t)};
}

SimState shifted(const SimState& s, const Derivative& k, double h) {
  return {s.t + h, s.positions + h * k.positions, s.gains + h * k.gains,
          s.target_offset + h * k.offset};
}

SimState advance(const SimulationProblem& problem, const SimState& state,
                 const StepEvaluation& first, double t_next) {
  const double dt = problem.settings.dt;
  const Derivative k1 = derivative_of(problem, first, state.t);
  SimState next;
  if (problem.settings.scheme == Scheme::ForwardEuler) {
    next = shifted(state, k1, dt);
  } else {
    const SimState s2 = shifted(state, k1, dt / 2);
    const Derivative k2 = derivative_of(problem, evaluate_state(problem, s2), s2.t);
    const SimState s3 = shifted(state, k2, dt / 2);
    const Derivative k3 = derivative_of(problem, evaluate_state(problem, s3), s3.t);
    const SimState s4 = shifted(state, k3, dt);
    const Derivative k4 = derivative_of(problem, evaluate_state(problem, s4), s4.t);
    next.positions =
        state.positions + dt / 6 * (k1.positions + 2 * k2.positions + 2 * k3.positions + k4.positions);
    next.gains = state.gains + dt / 6 * (k1.gains + 2 * k2.gains + 2 * k3.gains + k4.gains);
    next.target_offset =
        state.target_offset + dt / 6 * (k1.offset + 2 * k2.offset + 2 * k3.offset + k4.offset);
  }
  next.t = t_next;

  if (has_leakage(problem.law)) next.gains = next.gains.cwiseMax(0.0);
  if (std::holds_alternative<KinematicLeaders>(problem.leader_mode)) {
    // leaders sit exactly on the moving target
    const Index dl = static_cast<Index>(problem.target.graph().leader_count()) * problem.target.dim();
    next.positions.head(dl) = moving_target(problem.target, next.target_offset).head(dl);
  }
  if (!next.positions.allFinite() || !next.gains.allFinite() || !next.target_offset.allFinite())
    throw Error(ErrorKind::NonFiniteState, "state diverged at t = " + std::to_string(next.t));
  return next;
}

}  // namespace

StepEvaluation evaluate_state(const SimulationProblem& problem, const SimState& state) {
  const TargetFormation& target = problem.target;
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  const Index dl = static_cast<Index>(graph.leader_count()) * d;

  StepEvaluation eval;
  try {
    eval.control = evaluate(problem.law, target, state.positions, state.gains, problem.settings.sign);
  } catch (const CoincidentAgentsError& e) {
    throw Error(ErrorKind::CollisionDetected,
                std::string(e.what()) + " at t = " + std::to_string(state.t));
  }

  const Index dn = state.positions.size();
  if (problem.disturbance_field) {
    eval.disturbance = problem.disturbance_field(state.t, state.positions);
  } else if (problem.disturbance.agent_count() > 0) {
    eval.disturbance = problem.disturbance.evaluate_all(state.t);
  } else {
    eval.disturbance = Eigen::VectorXd::Zero(dn);
  }
  if (eval.disturbance.size() != dn)
    throw Error(ErrorKind::DimensionMismatch, "disturbance has wrong length");

  eval.velocity = eval.control.u + eval.disturbance;
  if (const auto* law = std::get_if<TrackingLawLeaders>(&problem.leader_mode)) {
    const Eigen::VectorXd desired = moving_target(target, state.target_offset).head(dl);
    eval.control.u.head(dl) = leader_tracking(state.positions.head(dl), desired, law->kp,
                                              law->beta1, problem.settings.sign);
    eval.velocity.head(dl) = eval.control.u.head(dl) + eval.disturbance.head(dl);
  } else {
    const Eigen::VectorXd v = leader_velocity(problem.leader_velocity, d, state.t);
    eval.velocity.head(dl) = v.replicate(graph.leader_count(), 1);
  }
  return eval;
}

SimState step(const SimulationProblem& problem, const SimState& state) {
  check_collision(problem, state);
  const StepEvaluation eval = evaluate_state(problem, state);
  return advance(problem, state, eval, state.t + problem.settings.dt);
}

SampleMetrics sample_metrics(const SimulationProblem& problem, const SimState& state,
                             const StepEvaluation& eval) {
  const TargetFormation& target = problem.target;
  const int d = target.dim();
  SampleMetrics m;
  m.delta_norm = (state.positions - moving_target(target, state.target_offset)).norm();
  try {
    const Eigen::VectorXd g = bearing_stack(target.graph(), state.positions, d);
    m.bearing_err = 0.0;
    for (int k = 0; k < target.graph().edge_count(); ++k)
      m.bearing_err += (block(g, k, d) - target.desired_bearings().bearing(k)).norm();
  } catch (const CoincidentAgentsError&) {
    m.bearing_err = std::numeric_limits<double>::quiet_NaN();
  }
  m.u_norm = eval.control.u.norm();
  m.min_dist = min_pairwise_distance(state.positions, d);
  m.d_norm = eval.disturbance.norm();
  return m;
}

RunResult run(const SimulationProblem& problem, const StepObserver& observer) {
  const IntegratorSettings& s = problem.settings;
  if (!(s.dt > 0.0)) throw Error(ErrorKind::ConfigError, "dt must be positive");
  if (s.stride < 1) throw Error(ErrorKind::ConfigError, "stride must be at least 1");
  if (s.sign.smoothed && !(s.sign.epsilon > 0.0))
    throw Error(ErrorKind::ConfigError, "smoothed sign requires epsilon > 0");

  RunResult result;
  SimState state = initial_state(problem);
  const auto steps = static_cast<long long>(std::llround(s.horizon / s.dt));
  auto& trace = result.trace;

  for (long long n = 0;; ++n) {
    try {
      check_collision(problem, state);
      const StepEvaluation eval = evaluate_state(problem, state);
      if (observer) observer(state, eval);
      if (n % s.stride == 0 || n == steps) {
        trace.times.push_back(state.t);
        trace.positions.push_back(state.positions);
        trace.gains.push_back(state.gains);
        trace.controls.push_back(eval.control.u);
        trace.disturbances.push_back(eval.disturbance);
        trace.metrics.push_back(sample_metrics(problem, state, eval));
      }
      if (n == steps) break;
      state = advance(problem, state, eval, static_cast<double>(n + 1) * s.dt);
    } catch (const Error& e) {
      result.failure = RunFailure{e.kind(), state.t, e.what()};
      break;
    }
  }
  result.final_state = state;
  return result;
}

}  // namespace bearing
