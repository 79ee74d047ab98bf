#pragma once

// Random instances and independent reference implementations shared by the
// unit tests. Oracles here deliberately avoid the library's assembly code.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <random>
#include <vector>

#include "bearing/graph.hpp"
#include "bearing/rigidity.hpp"
#include "bearing/target.hpp"

namespace test {

using bearing::Edge;
using bearing::FormationGraph;
using bearing::Index;

inline Eigen::VectorXd random_config(std::mt19937_64& rng, int n, int d, double min_sep = 0.2) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd p(n * d);
  do {
    for (Index k = 0; k < p.size(); ++k) p(k) = u(rng);
  } while (bearing::min_pairwise_distance(p, d) < min_sep);
  return p;
}

/// Random spanning tree plus each remaining pair with probability `extra`.
inline FormationGraph random_graph(std::mt19937_64& rng, int n, int leaders, double extra) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (int i = 1; i < n; ++i) {
    const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    edges.push_back({j, i});
    used[j][i] = used[i][j] = true;
  }
  std::bernoulli_distribution coin(extra);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!used[i][j] && coin(rng)) edges.push_back({i, j});
  return FormationGraph(n, leaders, edges);
}

/// H ⊗ I_d through Eigen's Kronecker product, H from the edge list.
inline Eigen::MatrixXd kron_incidence(const FormationGraph& g, int d) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(g.edge_count(), g.vertex_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    H(k, g.edge(k).from) = -1.0;
    H(k, g.edge(k).to) = 1.0;
  }
  return Eigen::kroneckerProduct(H, Eigen::MatrixXd::Identity(d, d)).eval();
}

/// blkdiag(w_k (I − g_k g_kᵀ)) · (H ⊗ I_d) with w_k = 1/‖z_k‖ or 1.
inline Eigen::MatrixXd rigidity_oracle(const FormationGraph& g, const Eigen::VectorXd& p, int d,
                                       bool scaled) {
  const Eigen::MatrixXd Hbar = kron_incidence(g, d);
  const Eigen::VectorXd z = Hbar * p;
  const Index m = g.edge_count();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m * d, m * d);
  for (Index k = 0; k < m; ++k) {
    const Eigen::VectorXd zk = z.segment(k * d, d);
    const Eigen::VectorXd gk = zk / zk.norm();
    const double w = scaled ? 1.0 / zk.norm() : 1.0;
    D.block(k * d, k * d, d, d) = w * (Eigen::MatrixXd::Identity(d, d) - gk * gk.transpose());
  }
  return D * Hbar;
}

/// Smallest eigenvalue of the follower block of R̃ᵀR̃ built by the oracle.
inline double lambda_min_oracle(const FormationGraph& g, const Eigen::VectorXd& pstar, int d) {
  const Eigen::MatrixXd R = rigidity_oracle(g, pstar, d, false);
  const Eigen::MatrixXd L = R.transpose() * R;
  const Index df = static_cast<Index>(g.follower_count()) * d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.bottomRightCorner(df, df));
  return es.eigenvalues()(0);
}

/// Leaders (0,0), (1,-1); follower target (1,0); edges 1-2, 1-3, 2-3.
/// At follower positions on the line x = 1 the 2-3 edge contributes nothing,
/// so the follower sees only the horizontal desired bearing toward agent 1.
inline bearing::TargetFormation toy_target() {
  Eigen::VectorXd p(6);
  p << 0, 0, 1, -1, 1, 0;
  return bearing::TargetFormation::from_configuration(
      FormationGraph(3, 2, {{0, 1}, {0, 2}, {1, 2}}), bearing::Configuration::make(2, p));
}

inline Eigen::VectorXd toy_positions(double x, double y) {
  Eigen::VectorXd p(6);
  p << 0, 0, 1, -1, x, y;
  return p;
}

}  // namespace test
