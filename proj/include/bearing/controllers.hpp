#pragma once

// Formation control laws as pure maps (positions, gain state) -> (control,
// gain derivative). Leader blocks of `u` are always zero here; leader motion
// is handled by the simulation engine.

#include <Eigen/Core>

#include <variant>

#include "bearing/sign.hpp"
#include "bearing/target.hpp"

namespace bearing {

struct EdgeGainState {
  Eigen::VectorXd gamma;  // one per undirected edge
};

struct AgentGainState {
  Eigen::VectorXd gamma;  // one per follower
  Eigen::VectorXd kappa;  // per-follower adaptation rates
};

struct PolyGainState {
  int order = 1;
  Eigen::MatrixXd beta;  // (order + 1) × m, row r holds β̂_r for every edge
};

struct ControlOutput {
  Eigen::VectorXd u;                // d·n
  Eigen::VectorXd gain_derivative;  // same layout as the gain state
};

/// q_ij = P_{g*_ij}(p_i − p_j) evaluated at the start vertex of every edge,
/// stacked as d·m. The end vertex sees −q_k.
Eigen::VectorXd projected_errors(const TargetFormation& target, const Eigen::VectorXd& p);

/// r = H̄ᵀ(g − g*), i.e. r_i = Σ_{j∈N_i}(g*_ij − g_ij), stacked over all n agents.
Eigen::VectorXd bearing_residual(const TargetFormation& target, const Eigen::VectorXd& p,
                                 double tol = kCoincidenceTol);

ControlOutput disp_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                            const EdgeGainState& gains, double kappa, SignMode sign = {});

/// Adds −k_p Σ γ_ij P_{g*_ij} q_ij to the adaptive law.
ControlOutput disp_prop_signum(const TargetFormation& target, const Eigen::VectorXd& p,
                               const EdgeGainState& gains, double kappa, double kp,
                               SignMode sign = {});

/// Proportional term plus leakage: γ̇_ij = κ(‖q_ij‖₁ − αγ_ij).
ControlOutput disp_leakage(const TargetFormation& target, const Eigen::VectorXd& p,
                           const EdgeGainState& gains, double kappa, double alpha, double kp,
                           SignMode sign = {});

/// γ_ij = Σ_r β̂_r ‖q_ij‖₁^r with β̂̇_r = ‖q_ij‖₁^{r+1}. Throws OrderMismatch
/// when the state's order differs from `order`.
ControlOutput poly_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                            const PolyGainState& gains, int order, SignMode sign = {});

ControlOutput bearing_only_adaptive(const TargetFormation& target, const Eigen::VectorXd& p,
                                    const AgentGainState& gains, SignMode sign = {});

ControlOutput bearing_only_leakage(const TargetFormation& target, const Eigen::VectorXd& p,
                                   const AgentGainState& gains, double kappa, double alpha,
                                   double kp, SignMode sign = {});

/// Per-leader position tracking: u_i = −k_p(p_i − p*_i) − β₁ sgn(p_i − p*_i).
Eigen::VectorXd leader_tracking(const Eigen::VectorXd& leaders, const Eigen::VectorXd& desired,
                                double kp, double beta1, SignMode sign = {});

// ---------------------------------------------------------------------------
// Law selection used by the simulation engine. Gain states are flattened:
// edge laws use m entries, agent laws n − l, the polynomial law (N + 1)·m
// ordered coefficient-major (entry r·m + k is β̂_r of edge k).

struct DispAdaptiveLaw {
  double kappa = 1.0;
};
struct DispPropSignumLaw {
  double kappa = 1.0;
  double kp = 1.0;
};
struct DispLeakageLaw {
  double kappa = 1.0;
  double alpha = 0.05;
  double kp = 0.5;
};
struct PolyAdaptiveLaw {
  int order = 1;
};
struct BearingOnlyAdaptiveLaw {
  Eigen::VectorXd kappa;  // per follower
};
struct BearingOnlyLeakageLaw {
  double kappa = 1.0;
  double alpha = 0.05;
  double kp = 0.5;
};

using ControlLaw = std::variant<DispAdaptiveLaw, DispPropSignumLaw, DispLeakageLaw,
                                PolyAdaptiveLaw, BearingOnlyAdaptiveLaw, BearingOnlyLeakageLaw>;

enum class GainLayout { PerEdge, PerFollower, Polynomial };

GainLayout gain_layout(const ControlLaw& law);
Index gain_size(const ControlLaw& law, const FormationGraph& graph);
bool uses_bearings(const ControlLaw& law);
/// Leakage laws can drive gains negative numerically; the engine clamps them.
bool has_leakage(const ControlLaw& law);

ControlOutput evaluate(const ControlLaw& law, const TargetFormation& target,
                       const Eigen::VectorXd& p, const Eigen::VectorXd& gains,
                       SignMode sign = {});

}  // namespace bearing
