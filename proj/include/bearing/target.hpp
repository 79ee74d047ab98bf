#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "bearing/graph.hpp"
#include "bearing/rigidity.hpp"

namespace bearing {

/// Stacked positions with pairwise-distinct agents.
struct Configuration {
  int dim = 0;
  Eigen::VectorXd positions;

  static Configuration make(int dim, Eigen::VectorXd positions,
                            double tol = kCoincidenceTol);
  Index agent_count() const noexcept { return positions.size() / dim; }
  auto position(Index i) const { return positions.segment(dim * i, dim); }
};

/// Stacked unit bearings, one per oriented edge.
struct BearingSet {
  int dim = 0;
  Eigen::VectorXd stacked;

  static BearingSet make(int dim, Eigen::VectorXd stacked, double tol = 1e-12);
  Index edge_count() const noexcept { return stacked.size() / dim; }
  auto bearing(Index k) const { return stacked.segment(dim * k, dim); }
};

/// Leader positions plus desired bearings; the follower part of p* is
/// reconstructed from the grounded bearing Laplacian. Construction fails with
/// NotUniquelyLocalizable unless L_ff is positive definite.
class TargetFormation {
 public:
  static TargetFormation from_configuration(FormationGraph graph, const Configuration& pstar,
                                            double pd_tol = 1e-10);
  static TargetFormation from_bearings(FormationGraph graph, int dim,
                                       Eigen::VectorXd leader_positions, BearingSet bearings,
                                       double pd_tol = 1e-10);

  const FormationGraph& graph() const noexcept { return graph_; }
  int dim() const noexcept { return dim_; }
  const Eigen::VectorXd& leader_positions() const noexcept { return leaders_; }
  const BearingSet& desired_bearings() const noexcept { return bearings_; }
  const std::optional<Configuration>& generating_configuration() const noexcept {
    return generating_;
  }

  /// Projection P_{g*_k} for edge k.
  const Eigen::MatrixXd& projection(int k) const {
    return projections_[static_cast<std::size_t>(k)];
  }
  const Eigen::MatrixXd& laplacian() const noexcept { return laplacian_; }
  const Eigen::MatrixXd& L_ff() const noexcept { return blocks_.ff; }
  const Eigen::MatrixXd& L_fl() const noexcept { return blocks_.fl; }
  double lambda_min_ff() const noexcept { return lambda_min_ff_; }
  double lambda_max_ff() const noexcept { return lambda_max_ff_; }

  /// p^{F*} solving L_fl p^L + L_ff p^{F*} = 0.
  const Eigen::VectorXd& followers() const noexcept { return followers_; }
  /// Full stacked p* = [p^L; p^{F*}].
  const Eigen::VectorXd& full() const noexcept { return full_; }

  /// max_k ‖g_k(p*) − g*_k‖: zero when the bearing list is realizable.
  double bearing_consistency_residual() const;

 private:
  TargetFormation(FormationGraph graph, int dim, Eigen::VectorXd leaders, BearingSet bearings,
                  std::optional<Configuration> generating, double pd_tol);

  FormationGraph graph_;
  int dim_;
  Eigen::VectorXd leaders_;
  BearingSet bearings_;
  std::optional<Configuration> generating_;
  std::vector<Eigen::MatrixXd> projections_;
  Eigen::MatrixXd laplacian_;
  GroundedBlocks<double> blocks_;
  double lambda_min_ff_ = 0.0;
  double lambda_max_ff_ = 0.0;
  Eigen::VectorXd followers_;
  Eigen::VectorXd full_;
};

/// SPD solve of the grounded system; throws NotUniquelyLocalizable when
/// λ_min(L_ff) ≤ tol.
Eigen::VectorXd solve_followers(const Eigen::MatrixXd& L_ff, const Eigen::MatrixXd& L_fl,
                                const Eigen::VectorXd& leader_positions, double tol = 1e-10);
inline const Eigen::VectorXd& solve_followers(const TargetFormation& target) {
  return target.followers();
}
inline double lambda_min_ff(const TargetFormation& target) { return target.lambda_min_ff(); }

}  // namespace bearing
