#include "bearing/target.hpp"

#include <cmath>
#include <string>

namespace bearing {

Configuration Configuration::make(int dim, Eigen::VectorXd positions, double tol) {
  if (dim < 2) throw Error(ErrorKind::DimensionMismatch, "dimension must be at least 2");
  if (positions.size() % dim != 0)
    throw Error(ErrorKind::DimensionMismatch, "position vector length not a multiple of d");
  if (!positions.allFinite()) throw Error(ErrorKind::NonFiniteState, "non-finite position");
  if (positions.size() / dim >= 2 && min_pairwise_distance(positions, dim) <= tol)
    throw CoincidentAgentsError(-1, "configuration has coincident agents");
  return {dim, std::move(positions)};
}

BearingSet BearingSet::make(int dim, Eigen::VectorXd stacked, double tol) {
  if (dim < 2) throw Error(ErrorKind::DimensionMismatch, "dimension must be at least 2");
  if (stacked.size() % dim != 0)
    throw Error(ErrorKind::DimensionMismatch, "bearing vector length not a multiple of d");
  for (Index k = 0; k < stacked.size() / dim; ++k)
    if (std::abs(stacked.segment(dim * k, dim).norm() - 1.0) > tol)
      throw Error(ErrorKind::NotUnit, "bearing " + std::to_string(k + 1) + " is not unit");
  return {dim, std::move(stacked)};
}

Eigen::VectorXd solve_followers(const Eigen::MatrixXd& L_ff, const Eigen::MatrixXd& L_fl,
                                const Eigen::VectorXd& leader_positions, double tol) {
  const double lmin = lambda_min(L_ff);
  if (!(lmin > tol))
    throw Error(ErrorKind::NotUniquelyLocalizable,
                "grounded bearing Laplacian is not positive definite (lambda_min = " +
                    std::to_string(lmin) + ")");
  Eigen::LLT<Eigen::MatrixXd> llt(L_ff);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotUniquelyLocalizable, "Cholesky factorization of L_ff failed");
  return llt.solve(-(L_fl * leader_positions));
}

TargetFormation TargetFormation::from_configuration(FormationGraph graph,
                                                    const Configuration& pstar, double pd_tol) {
  if (pstar.agent_count() != graph.vertex_count())
    throw Error(ErrorKind::DimensionMismatch, "configuration size does not match graph");
  const int d = pstar.dim;
  BearingSet g = BearingSet::make(d, bearing_stack(graph, pstar.positions, d));
  Eigen::VectorXd leaders = pstar.positions.head(static_cast<Index>(graph.leader_count()) * d);
  return TargetFormation(std::move(graph), d, std::move(leaders), std::move(g), pstar, pd_tol);
}

TargetFormation TargetFormation::from_bearings(FormationGraph graph, int dim,
                                               Eigen::VectorXd leader_positions,
                                               BearingSet bearings, double pd_tol) {
  if (bearings.dim != dim || bearings.edge_count() != graph.edge_count())
    throw Error(ErrorKind::DimensionMismatch, "bearing set does not match graph");
  if (leader_positions.size() != static_cast<Index>(graph.leader_count()) * dim)
    throw Error(ErrorKind::DimensionMismatch, "leader position vector has wrong length");
  return TargetFormation(std::move(graph), dim, std::move(leader_positions), std::move(bearings),
                         std::nullopt, pd_tol);
}

TargetFormation::TargetFormation(FormationGraph graph, int dim, Eigen::VectorXd leaders,
                                 BearingSet bearings, std::optional<Configuration> generating,
                                 double pd_tol)
    : graph_(std::move(graph)),
      dim_(dim),
      leaders_(std::move(leaders)),
      bearings_(std::move(bearings)),
      generating_(std::move(generating)) {
  projections_.reserve(static_cast<std::size_t>(graph_.edge_count()));
  for (int k = 0; k < graph_.edge_count(); ++k)
    projections_.push_back(projection_matrix(bearings_.bearing(k)));

  laplacian_ = bearing_laplacian(graph_, bearings_.stacked, dim_);
  blocks_ = grounded_blocks(laplacian_, dim_, graph_.leader_count());
  lambda_min_ff_ = lambda_min(blocks_.ff);
  lambda_max_ff_ = lambda_max(blocks_.ff);
  followers_ = solve_followers(blocks_.ff, blocks_.fl, leaders_, pd_tol);

  full_.resize(laplacian_.rows());
  full_ << leaders_, followers_;
}

double TargetFormation::bearing_consistency_residual() const {
  const Eigen::VectorXd g = bearing_stack(graph_, full_, dim_);
  double worst = 0.0;
  for (int k = 0; k < graph_.edge_count(); ++k)
    worst = std::max(worst, (block(g, k, dim_) - bearings_.bearing(k)).norm());
  return worst;
}

}  // namespace bearing
