#pragma once

// Closed-form thresholds and bounds from the Lyapunov analysis of the control
// laws, plus checks that evaluate them against simulated states.

#include <Eigen/Core>

#include <optional>

#include "bearing/controllers.hpp"
#include "bearing/sim.hpp"
#include "bearing/target.hpp"

namespace bearing {

/// γ₀ = β √(dn / λ_min(L_ff)).
double gamma0_threshold(const TargetFormation& target, double beta);
/// γ₀′ = (β + ‖v*‖_∞) √(dn / λ_min(L_ff)) for moving leaders.
double gamma0_tracking(const TargetFormation& target, double beta, double velocity_sup);

/// ε = √2 (χ √λ_min − √(dn) β); positive iff χ > γ₀.
double convergence_rate(const TargetFormation& target, double beta, double chi);

/// T ≤ 2√V(0)/ε. Throws ThresholdNotMet when χ ≤ γ₀.
double finite_time_bound(const TargetFormation& target, double beta, double chi, double V0);

double formation_error(const Eigen::VectorXd& p, const Eigen::VectorXd& pstar);
/// Σ_k ‖g_k − g*_k‖.
double bearing_error(const Eigen::VectorXd& g, const Eigen::VectorXd& gstar, int d);

struct ResidualSigns {
  double p_r;      // pᵀr       (≥ 0)
  double pstar_r;  // p*ᵀr      (≤ 0)
  double delta_r;  // (p−p*)ᵀr  (≥ 0)
};
ResidualSigns residual_signs(const TargetFormation& target, const Eigen::VectorXd& p);

struct ResidualBounds {
  double lower;                 // pᵀL*p / (2 max‖z‖)
  double value;                 // pᵀr
  std::optional<double> upper;  // pᵀL*p / min‖z‖, only when every g_kᵀg*_k ≥ 0
};
ResidualBounds residual_bounds(const TargetFormation& target, const Eigen::VectorXd& p);

struct CollisionMargin {
  double eta;     // (ζ + √(nζ² + 4Mζ)) / 2
  double margin;  // N̄ − √n η
  double zeta;    // V0 / ϑ
  double vartheta;
  double max_separation;  // M
  double min_separation;  // N̄
};
CollisionMargin collision_margin(const TargetFormation& target, double V0);

struct UltimateBound {
  double delta;             // Δ = mαγ̄² / (2ϱθ)
  double rho;               // min{2 k_p λ_min, κα}
  double ball_radius;       // h₂⁻¹(h₁(Δ))
  double level_set_radius;  // h₁⁻¹(Δ): radius of the sublevel set {V ≤ Δ}
};
/// Leakage-law ultimate bound. `gamma_bar` must exceed γ₀ for the bound to
/// apply; that condition involves β and is left to the caller.
UltimateBound ultimate_bound(const TargetFormation& target, double kp, double kappa,
                             double alpha, double gamma_bar, double theta);

/// V = pᵀr + Σ_f (γ_f − γ₀)² / (2κ_f) for the bearing-only laws.
double bearing_only_lyapunov(const TargetFormation& target, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& gains, const Eigen::VectorXd& kappa,
                             double gamma0);

/// Finite-time condition on converged edge gains: every γ*_k > γ₀ and
/// |γ_k − γ*_k| < min_k |γ_k − γ₀| for all k.
bool finite_time_gain_condition(const Eigen::VectorXd& gains, const Eigen::VectorXd& limit,
                                double gamma0);

/// Central finite differences of bearing_stack, one column per coordinate.
Eigen::MatrixXd fd_jacobian_oracle(const FormationGraph& graph, const Eigen::VectorXd& p, int d,
                                   double h = 1e-6);

/// Every bound applicable to a problem, computed without simulating.
struct BoundReport {
  double beta = 0.0;           // observed sup ‖d‖_∞
  double velocity_sup = 0.0;   // ‖v*‖_∞
  double lambda_min_ff = 0.0;
  double gamma0 = 0.0;                    // γ₀ (or γ₀′ with moving leaders)
  std::optional<double> gamma0_tracking;  // set when leaders move
  double chi = 0.0;                       // min_k γ_k(0)
  double V0 = 0.0;
  std::optional<double> epsilon;  // present when ε > 0
  std::optional<double> T_bound;
  std::optional<CollisionMargin> collision;
  std::optional<UltimateBound> ultimate;
  double gamma_bar = 0.0;  // γ̄ used by the ultimate bound / γ₀ used by bearing-only V
  std::string note;
};

struct BoundOptions {
  double sampling_dt = 1e-3;  // dense grid for β
  double theta = 0.5;
  double gamma_margin = 1.05;  // γ₀ (bearing-only) or γ̄ (leakage) as a multiple of the threshold
};

BoundReport compute_bounds(const SimulationProblem& problem, const BoundOptions& options = {});

}  // namespace bearing
