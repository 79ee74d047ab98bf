#include "bearing/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bearing {

namespace {

enum class Proportional { None, Gained, Ungained };

/// Shared body of the displacement laws. `gamma` holds the effective per-edge
/// gain; the proportional term is either absent, weighted by γ, or plain k_p.
Eigen::VectorXd displacement_control(const TargetFormation& target, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& gamma, Proportional prop, double kp,
                                     SignMode sign, Eigen::VectorXd* q_l1) {
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p.size());
  if (q_l1) q_l1->resize(graph.edge_count());

  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    const Eigen::MatrixXd& P = target.projection(k);
    Eigen::VectorXd q = P * (block(p, e.from, d) - block(p, e.to, d));
    snap_roundoff(q, std::max(block(p, e.from, d).lpNorm<Eigen::Infinity>(),
                              block(p, e.to, d).lpNorm<Eigen::Infinity>()));
    if (q_l1) (*q_l1)(k) = q.lpNorm<1>();

    // contribution at the start vertex; the end vertex sees the negation
    // because q_ji = −q_ij and sgn is odd
    Eigen::VectorXd term = gamma(k) * (P * sign_fn(q, sign));
    switch (prop) {
      case Proportional::None: break;
      case Proportional::Gained: term += kp * gamma(k) * (P * q); break;
      case Proportional::Ungained: term += kp * (P * q); break;
    }
    if (!graph.is_leader(e.from)) block(u, e.from, d) -= term;
    if (!graph.is_leader(e.to)) block(u, e.to, d) += term;
  }
  return u;
}

void require_size(Index actual, Index expected, const char* what) {
  if (actual != expected)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has size " +
                                                  std::to_string(actual) + ", expected " +
                                                  std::to_string(expected));
}

}  // namespace

Eigen::VectorXd projected_errors(const TargetFormation& target, const Eigen::VectorXd& p) {
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  Eigen::VectorXd q(graph.edge_count() * d);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    auto qk = block(q, k, d);
    qk = target.projection(k) * (block(p, e.from, d) - block(p, e.to, d));
    snap_roundoff(qk, std::max(block(p, e.from, d).lpNorm<Eigen::Infinity>(),
                               block(p, e.to, d).lpNorm<Eigen::Infinity>()));
  }
  return q;
}

Eigen::VectorXd bearing_residual(const TargetFormation& target, const Eigen::VectorXd& p,
                                 double tol) {
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  const Eigen::VectorXd g = bearing_stack(graph, p, d, tol);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(p.size());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    const Eigen::VectorXd diff = block(g, k, d) - target.desired_bearings().bearing(k);
    // H̄ᵀ: −1 at the start vertex, +1 at the end vertex
    block(r, e.from, d) -= diff;
    block(r, e.to, d) += diff;
  }
  return r;
}

ControlOutput disp_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                            const EdgeGainState& gains, double kappa, SignMode sign) {
  require_size(gains.gamma.size(), target.graph().edge_count(), "edge gain state");
  ControlOutput out;
  out.u = displacement_control(target, p, gains.gamma, Proportional::None, 0.0, sign,
                               &out.gain_derivative);
  out.gain_derivative *= kappa;
  return out;
}

ControlOutput disp_prop_signum(const TargetFormation& target, const Eigen::VectorXd& p,
                               const EdgeGainState& gains, double kappa, double kp,
                               SignMode sign) {
  require_size(gains.gamma.size(), target.graph().edge_count(), "edge gain state");
  ControlOutput out;
  out.u = displacement_control(target, p, gains.gamma, Proportional::Gained, kp, sign,
                               &out.gain_derivative);
  out.gain_derivative *= kappa;
  return out;
}

ControlOutput disp_leakage(const TargetFormation& target, const Eigen::VectorXd& p,
                           const EdgeGainState& gains, double kappa, double alpha, double kp,
                           SignMode sign) {
  require_size(gains.gamma.size(), target.graph().edge_count(), "edge gain state");
  ControlOutput out;
  out.u = displacement_control(target, p, gains.gamma, Proportional::Ungained, kp, sign,
                               &out.gain_derivative);
  out.gain_derivative = kappa * (out.gain_derivative - alpha * gains.gamma);
  return out;
}

ControlOutput poly_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                            const PolyGainState& gains, int order, SignMode sign) {
  const int m = target.graph().edge_count();
  if (gains.order != order || gains.beta.rows() != order + 1)
    throw Error(ErrorKind::OrderMismatch, "polynomial gain state has order " +
                                              std::to_string(gains.order) + ", law expects " +
                                              std::to_string(order));
  require_size(gains.beta.cols(), m, "polynomial gain state");

  const Eigen::VectorXd q = projected_errors(target, p);
  const int d = target.dim();
  Eigen::VectorXd gamma(m);
  ControlOutput out;
  out.gain_derivative.resize(static_cast<Index>(order + 1) * m);
  for (int k = 0; k < m; ++k) {
    const double a = block(q, k, d).lpNorm<1>();
    // Horner for Σ_r β̂_r a^r
    double g = 0.0;
    for (int r = order; r >= 0; --r) g = g * a + gains.beta(r, k);
    gamma(k) = g;
    double power = a;
    for (int r = 0; r <= order; ++r) {
      out.gain_derivative(static_cast<Index>(r) * m + k) = power;
      power *= a;
    }
  }
  out.u = displacement_control(target, p, gamma, Proportional::None, 0.0, sign, nullptr);
  return out;
}

namespace {

ControlOutput bearing_only_common(const TargetFormation& target, const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& gamma, double kp, SignMode sign,
                                  Eigen::VectorXd& r_l1) {
  const FormationGraph& graph = target.graph();
  const int d = target.dim();
  const int l = graph.leader_count();
  require_size(gamma.size(), graph.follower_count(), "agent gain state");

  Eigen::VectorXd r = bearing_residual(target, p);
  for (int i = l; i < graph.vertex_count(); ++i) {
    auto ri = block(r, i, d);
    snap_roundoff(ri, 2.0 * static_cast<double>(graph.incidences(i).size()));
  }
  ControlOutput out;
  out.u = Eigen::VectorXd::Zero(p.size());
  r_l1.resize(graph.follower_count());
  for (int f = 0; f < graph.follower_count(); ++f) {
    const auto ri = block(r, l + f, d);
    r_l1(f) = ri.lpNorm<1>();
    block(out.u, l + f, d) = -gamma(f) * sign_fn(ri, sign) - kp * ri;
  }
  return out;
}

}  // namespace

ControlOutput bearing_only_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                                    const AgentGainState& gains, SignMode sign) {
  require_size(gains.kappa.size(), target.graph().follower_count(), "agent adaptation rates");
  Eigen::VectorXd r_l1;
  ControlOutput out = bearing_only_common(target, p, gains.gamma, 0.0, sign, r_l1);
  out.gain_derivative = gains.kappa.cwiseProduct(r_l1);
  return out;
}

ControlOutput bearing_only_leakage(const TargetFormation& target, const Eigen::VectorXd& p,
                                   const AgentGainState& gains, double kappa, double alpha,
                                   double kp, SignMode sign) {
  Eigen::VectorXd r_l1;
  ControlOutput out = bearing_only_common(target, p, gains.gamma, kp, sign, r_l1);
  out.gain_derivative = kappa * (r_l1 - alpha * gains.gamma);
  return out;
}

Eigen::VectorXd leader_tracking(const Eigen::VectorXd& leaders, const Eigen::VectorXd& desired,
                                double kp, double beta1, SignMode sign) {
  require_size(desired.size(), leaders.size(), "desired leader positions");
  Eigen::VectorXd e = leaders - desired;
  for (Index i = 0; i < e.size(); ++i) {
    auto ei = e.segment(i, 1);
    snap_roundoff(ei, std::max(std::abs(leaders(i)), std::abs(desired(i))));
  }
  return -kp * e - beta1 * sign_fn(e, sign);
}

// ---------------------------------------------------------------------------

GainLayout gain_layout(const ControlLaw& law) {
  struct {
    GainLayout operator()(const DispAdaptiveLaw&) const { return GainLayout::PerEdge; }
    GainLayout operator()(const DispPropSignumLaw&) const { return GainLayout::PerEdge; }
    GainLayout operator()(const DispLeakageLaw&) const { return GainLayout::PerEdge; }
    GainLayout operator()(const PolyAdaptiveLaw&) const { return GainLayout::Polynomial; }
    GainLayout operator()(const BearingOnlyAdaptiveLaw&) const { return GainLayout::PerFollower; }
    GainLayout operator()(const BearingOnlyLeakageLaw&) const { return GainLayout::PerFollower; }
  } visitor;
  return std::visit(visitor, law);
}

Index gain_size(const ControlLaw& law, const FormationGraph& graph) {
  switch (gain_layout(law)) {
    case GainLayout::PerEdge: return graph.edge_count();
    case GainLayout::PerFollower: return graph.follower_count();
    case GainLayout::Polynomial:
      return static_cast<Index>(std::get<PolyAdaptiveLaw>(law).order + 1) * graph.edge_count();
  }
  return 0;
}

bool uses_bearings(const ControlLaw& law) {
  return gain_layout(law) == GainLayout::PerFollower;
}

bool has_leakage(const ControlLaw& law) {
  return std::holds_alternative<DispLeakageLaw>(law) ||
         std::holds_alternative<BearingOnlyLeakageLaw>(law);
}

ControlOutput evaluate(const ControlLaw& law, const TargetFormation& target,
                       const Eigen::VectorXd& p, const Eigen::VectorXd& gains, SignMode sign) {
  struct Visitor {
    const TargetFormation& target;
    const Eigen::VectorXd& p;
    const Eigen::VectorXd& gains;
    SignMode sign;

    ControlOutput operator()(const DispAdaptiveLaw& l) const {
      return disp_adaptive(target, p, {gains}, l.kappa, sign);
    }
    ControlOutput operator()(const DispPropSignumLaw& l) const {
      return disp_prop_signum(target, p, {gains}, l.kappa, l.kp, sign);
    }
    ControlOutput operator()(const DispLeakageLaw& l) const {
      return disp_leakage(target, p, {gains}, l.kappa, l.alpha, l.kp, sign);
    }
    ControlOutput operator()(const PolyAdaptiveLaw& l) const {
      const Index m = target.graph().edge_count();
      PolyGainState state{l.order, gains.reshaped(m, l.order + 1).transpose()};
      return poly_adaptive(target, p, state, l.order, sign);
    }
    ControlOutput operator()(const BearingOnlyAdaptiveLaw& l) const {
      return bearing_only_adaptive(target, p, {gains, l.kappa}, sign);
    }
    ControlOutput operator()(const BearingOnlyLeakageLaw& l) const {
      return bearing_only_leakage(target, p, {gains, {}}, l.kappa, l.alpha, l.kp, sign);
    }
  };
  return std::visit(Visitor{target, p, gains, sign}, law);
}

}  // namespace bearing
