#include "bearing/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bearing {

namespace {

double dn_of(const TargetFormation& target) {
  return static_cast<double>(target.graph().vertex_count()) * target.dim();
}

}  // namespace

double gamma0_threshold(const TargetFormation& target, double beta) {
  return beta * std::sqrt(dn_of(target) / target.lambda_min_ff());
}

double gamma0_tracking(const TargetFormation& target, double beta, double velocity_sup) {
  return gamma0_threshold(target, beta + velocity_sup);
}

double convergence_rate(const TargetFormation& target, double beta, double chi) {
  return std::sqrt(2.0) *
         (chi * std::sqrt(target.lambda_min_ff()) - std::sqrt(dn_of(target)) * beta);
}

double finite_time_bound(const TargetFormation& target, double beta, double chi, double V0) {
  const double gamma0 = gamma0_threshold(target, beta);
  if (!(chi > gamma0))
    throw Error(ErrorKind::ThresholdNotMet, "initial gain " + std::to_string(chi) +
                                                " does not exceed gamma0 = " +
                                                std::to_string(gamma0));
  return 2.0 * std::sqrt(V0) / convergence_rate(target, beta, chi);
}

double formation_error(const Eigen::VectorXd& p, const Eigen::VectorXd& pstar) {
  return (p - pstar).norm();
}

double bearing_error(const Eigen::VectorXd& g, const Eigen::VectorXd& gstar, int d) {
  double sum = 0.0;
  for (Index k = 0; k < g.size() / d; ++k) sum += (block(g, k, d) - block(gstar, k, d)).norm();
  return sum;
}

ResidualSigns residual_signs(const TargetFormation& target, const Eigen::VectorXd& p) {
  const Eigen::VectorXd r = bearing_residual(target, p);
  const Eigen::VectorXd& pstar = target.full();
  return {p.dot(r), pstar.dot(r), (p - pstar).dot(r)};
}

ResidualBounds residual_bounds(const TargetFormation& target, const Eigen::VectorXd& p) {
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  const Eigen::VectorXd z = stacked_displacements(graph, p, d);
  const Eigen::VectorXd g = bearing_stack(graph, p, d);

  double zmax = 0.0;
  double zmin = std::numeric_limits<double>::infinity();
  bool aligned = true;
  for (int k = 0; k < graph.edge_count(); ++k) {
    const double len = block(z, k, d).norm();
    zmax = std::max(zmax, len);
    zmin = std::min(zmin, len);
    if (block(g, k, d).dot(target.desired_bearings().bearing(k)) < 0.0) aligned = false;
  }
  const double quad = p.dot(target.laplacian() * p);
  ResidualBounds out{quad / (2.0 * zmax), p.dot(bearing_residual(target, p)), std::nullopt};
  if (aligned) out.upper = quad / zmin;
  return out;
}

CollisionMargin collision_margin(const TargetFormation& target, double V0) {
  if (V0 < 0.0) throw Error(ErrorKind::ConfigError, "V0 must be nonnegative");
  const double n = target.graph().vertex_count();
  CollisionMargin c{};
  c.vartheta = target.lambda_min_ff() / 2.0;
  c.zeta = V0 / c.vartheta;
  c.max_separation = max_pairwise_distance(target.full(), target.dim());
  c.min_separation = min_pairwise_distance(target.full(), target.dim());
  c.eta = (c.zeta + std::sqrt(n * c.zeta * c.zeta + 4.0 * c.max_separation * c.zeta)) / 2.0;
  c.margin = c.min_separation - std::sqrt(n) * c.eta;
  return c;
}

UltimateBound ultimate_bound(const TargetFormation& target, double kp, double kappa,
                             double alpha, double gamma_bar, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::BadTheta, "theta must lie in (0, 1)");
  const double m = target.graph().edge_count();
  UltimateBound b{};
  b.rho = std::min(2.0 * kp * target.lambda_min_ff(), kappa * alpha);
  if (alpha == 0.0 || gamma_bar == 0.0) {
    b.delta = 0.0;
  } else if (!(b.rho > 0.0)) {
    b.delta = std::numeric_limits<double>::infinity();
  } else {
    b.delta = m * alpha * gamma_bar * gamma_bar / (2.0 * b.rho * theta);
  }
  // V is sandwiched by c₁‖x‖² and c₂‖x‖²
  const double c1 = std::min(0.5, 0.5 / kappa);
  const double c2 = std::max(0.5, 0.5 / kappa);
  b.ball_radius = std::sqrt(c1 * b.delta * b.delta / c2);
  b.level_set_radius = std::sqrt(b.delta / c1);
  return b;
}

double bearing_only_lyapunov(const TargetFormation& target, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& gains, const Eigen::VectorXd& kappa,
                             double gamma0) {
  const double pr = p.dot(bearing_residual(target, p));
  return pr + ((gains.array() - gamma0).square() / (2.0 * kappa.array())).sum();
}

bool finite_time_gain_condition(const Eigen::VectorXd& gains, const Eigen::VectorXd& limit,
                                double gamma0) {
  if ((limit.array() <= gamma0).any()) return false;
  const double closest = (gains.array() - gamma0).abs().minCoeff();
  return ((gains - limit).array().abs() < closest).all();
}

Eigen::MatrixXd fd_jacobian_oracle(const FormationGraph& graph, const Eigen::VectorXd& p, int d,
                                   double h) {
  Eigen::MatrixXd J(static_cast<Index>(graph.edge_count()) * d, p.size());
  Eigen::VectorXd probe = p;
  for (Index c = 0; c < p.size(); ++c) {
    probe(c) = p(c) + h;
    const Eigen::VectorXd plus = bearing_stack(graph, probe, d);
    probe(c) = p(c) - h;
    const Eigen::VectorXd minus = bearing_stack(graph, probe, d);
    probe(c) = p(c);
    J.col(c) = (plus - minus) / (2.0 * h);
  }
  return J;
}

BoundReport compute_bounds(const SimulationProblem& problem, const BoundOptions& options) {
  const TargetFormation& target = problem.target;
  const int d = target.dim();
  BoundReport rep;
  rep.lambda_min_ff = target.lambda_min_ff();
  if (problem.disturbance_field) {
    rep.note = "state-dependent disturbance: beta not sampled; ";
  } else if (problem.disturbance.agent_count() > 0) {
    rep.beta = observed_sup_norm(problem.disturbance, problem.settings.horizon,
                                 options.sampling_dt);
  }
  rep.velocity_sup = leader_velocity_sup_norm(problem.leader_velocity, d);
  rep.gamma0 = gamma0_threshold(target, rep.beta);
  const bool moving = is_moving(problem.leader_velocity);
  if (moving) rep.gamma0_tracking = gamma0_tracking(target, rep.beta, rep.velocity_sup);
  const double effective_beta = rep.beta + (moving ? rep.velocity_sup : 0.0);
  const double threshold = moving ? *rep.gamma0_tracking : rep.gamma0;

  const GainLayout layout = gain_layout(problem.law);
  const Eigen::VectorXd& g0 = problem.initial_gains;
  if (layout == GainLayout::PerFollower) {
    rep.gamma_bar = options.gamma_margin * effective_beta;
    Eigen::VectorXd kappa;
    if (const auto* law = std::get_if<BearingOnlyAdaptiveLaw>(&problem.law)) {
      kappa = law->kappa;
    } else {
      kappa = Eigen::VectorXd::Constant(target.graph().follower_count(),
                                        std::get<BearingOnlyLeakageLaw>(problem.law).kappa);
    }
    rep.chi = g0.size() ? g0.minCoeff() : 0.0;
    rep.V0 = bearing_only_lyapunov(target, problem.initial_positions, g0, kappa, rep.gamma_bar);
    rep.collision = collision_margin(target, rep.V0);
    rep.note += "bearing-only: V0 = p'r + sum (gamma_i - gamma0)^2 / (2 kappa_i)";
    return rep;
  }

  const Index m = target.graph().edge_count();
  rep.chi = g0.head(m).minCoeff();  // β̂₀ row for the polynomial law
  rep.V0 = 0.5 * (problem.initial_positions - target.full()).squaredNorm();
  const double eps = convergence_rate(target, effective_beta, rep.chi);
  if (eps > 0.0) rep.epsilon = eps;

  if (std::holds_alternative<DispAdaptiveLaw>(problem.law) ||
      std::holds_alternative<DispPropSignumLaw>(problem.law)) {
    if (rep.epsilon) rep.T_bound = 2.0 * std::sqrt(rep.V0) / eps;
    else rep.note += "chi <= gamma0: finite-time bound not available";
  } else if (const auto* law = std::get_if<DispLeakageLaw>(&problem.law)) {
    rep.gamma_bar = options.gamma_margin * threshold;
    rep.ultimate =
        ultimate_bound(target, law->kp, law->kappa, law->alpha, rep.gamma_bar, options.theta);
  }
  return rep;
}

}  // namespace bearing
