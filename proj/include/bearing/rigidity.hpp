#pragma once

// Bearing-rigidity linear algebra over stacked configurations.
//
// A configuration in R^d with n agents is a column vector of length d*n in
// which agent i occupies rows [d*i, d*i + d). Stacked per-edge quantities
// (displacements, bearings) follow the edge indexing of the FormationGraph.
// Everything here is templated on the scalar so the same code serves double
// simulations and extended-precision test oracles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bearing/error.hpp"
#include "bearing/graph.hpp"

namespace bearing {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kCoincidenceTol = 1e-9;
inline constexpr double kUnitTol = 1e-9;
inline constexpr double kRankTol = 1e-8;

/// Block i (length d) of a stacked vector.
template <typename Derived>
auto block(const Eigen::MatrixBase<Derived>& v, Index i, Index d) {
  return v.derived().segment(d * i, d);
}
template <typename Derived>
auto block(Eigen::MatrixBase<Derived>& v, Index i, Index d) {
  return v.derived().segment(d * i, d);
}

template <typename Scalar = double>
MatrixX<Scalar> incidence_matrix(int n, std::span<const Edge> edges) {
  MatrixX<Scalar> H = MatrixX<Scalar>::Zero(static_cast<Index>(edges.size()), n);
  for (Index k = 0; k < H.rows(); ++k) {
    H(k, edges[static_cast<std::size_t>(k)].from) = Scalar(-1);
    H(k, edges[static_cast<std::size_t>(k)].to) = Scalar(1);
  }
  return H;
}

template <typename Scalar = double>
MatrixX<Scalar> incidence_matrix(const FormationGraph& graph) {
  return incidence_matrix<Scalar>(graph.vertex_count(), graph.edges());
}

/// H ⊗ I_d.
template <typename Scalar = double>
MatrixX<Scalar> expanded_incidence(const FormationGraph& graph, int d) {
  const MatrixX<Scalar> H = incidence_matrix<Scalar>(graph);
  MatrixX<Scalar> Hbar = MatrixX<Scalar>::Zero(H.rows() * d, H.cols() * d);
  for (Index k = 0; k < H.rows(); ++k)
    for (Index i = 0; i < H.cols(); ++i)
      if (H(k, i) != Scalar(0))
        Hbar.block(k * d, i * d, d, d).diagonal().setConstant(H(k, i));
  return Hbar;
}

/// Unit vector from `from` toward `to`.
template <typename DerivedA, typename DerivedB>
VectorX<typename DerivedA::Scalar> bearing(const Eigen::MatrixBase<DerivedA>& from,
                                           const Eigen::MatrixBase<DerivedB>& to,
                                           double tol = kCoincidenceTol) {
  using Scalar = typename DerivedA::Scalar;
  VectorX<Scalar> z = to - from;
  const Scalar dist = z.norm();
  if (!(dist > Scalar(tol))) throw CoincidentAgentsError(-1, "bearing undefined: agents coincide");
  return z / dist;
}

/// z = H̄ p.
template <typename Derived>
VectorX<typename Derived::Scalar> stacked_displacements(const FormationGraph& graph,
                                                        const Eigen::MatrixBase<Derived>& p,
                                                        int d) {
  VectorX<typename Derived::Scalar> z(graph.edge_count() * d);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    block(z, k, d) = block(p, e.to, d) - block(p, e.from, d);
  }
  return z;
}

template <typename Derived>
VectorX<typename Derived::Scalar> bearing_stack(const FormationGraph& graph,
                                                const Eigen::MatrixBase<Derived>& p, int d,
                                                double tol = kCoincidenceTol) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> g(graph.edge_count() * d);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    VectorX<Scalar> z = block(p, e.to, d) - block(p, e.from, d);
    const Scalar dist = z.norm();
    if (!(dist > Scalar(tol)))
      throw CoincidentAgentsError(k, "agents " + std::to_string(e.from + 1) + " and " +
                                         std::to_string(e.to + 1) + " coincide on edge " +
                                         std::to_string(k + 1));
    block(g, k, d) = z / dist;
  }
  return g;
}

/// P_g = I - g gᵀ.
template <typename Derived>
MatrixX<typename Derived::Scalar> projection_matrix(const Eigen::MatrixBase<Derived>& g,
                                                    double tol = kUnitTol) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  if (!(abs(g.norm() - Scalar(1)) <= Scalar(tol)))
    throw Error(ErrorKind::NotUnit, "projection requires a unit vector");
  return MatrixX<Scalar>::Identity(g.size(), g.size()) - g * g.transpose();
}

/// R_b = blkdiag(P_{g_k} / ‖z_k‖) H̄ = ∂g/∂p.
template <typename Derived>
MatrixX<typename Derived::Scalar> rigidity_matrix(const FormationGraph& graph,
                                                  const Eigen::MatrixBase<Derived>& p, int d,
                                                  double tol = kCoincidenceTol) {
  using Scalar = typename Derived::Scalar;
  const Index m = graph.edge_count();
  MatrixX<Scalar> R = MatrixX<Scalar>::Zero(m * d, graph.vertex_count() * d);
  for (int k = 0; k < m; ++k) {
    const Edge& e = graph.edge(k);
    VectorX<Scalar> z = block(p, e.to, d) - block(p, e.from, d);
    const Scalar dist = z.norm();
    if (!(dist > Scalar(tol)))
      throw CoincidentAgentsError(k, "agents coincide on edge " + std::to_string(k + 1));
    const VectorX<Scalar> g = z / dist;
    const MatrixX<Scalar> P = (MatrixX<Scalar>::Identity(d, d) - g * g.transpose()) / dist;
    R.block(k * d, e.from * d, d, d) = -P;
    R.block(k * d, e.to * d, d, d) = P;
  }
  return R;
}

/// R̃_b = blkdiag(P_{g_k}) H̄, built from a stacked bearing vector.
template <typename Derived>
MatrixX<typename Derived::Scalar> augmented_rigidity_matrix(const FormationGraph& graph,
                                                            const Eigen::MatrixBase<Derived>& g,
                                                            int d) {
  using Scalar = typename Derived::Scalar;
  const Index m = graph.edge_count();
  MatrixX<Scalar> R = MatrixX<Scalar>::Zero(m * d, graph.vertex_count() * d);
  for (int k = 0; k < m; ++k) {
    const Edge& e = graph.edge(k);
    const MatrixX<Scalar> P = projection_matrix(block(g, k, d));
    R.block(k * d, e.from * d, d, d) = -P;
    R.block(k * d, e.to * d, d, d) = P;
  }
  return R;
}

/// L_b = R̃_bᵀ R̃_b, assembled edge by edge (each edge adds ±P_{g_k} blocks).
template <typename Derived>
MatrixX<typename Derived::Scalar> bearing_laplacian(const FormationGraph& graph,
                                                    const Eigen::MatrixBase<Derived>& g, int d) {
  using Scalar = typename Derived::Scalar;
  const Index dn = static_cast<Index>(graph.vertex_count()) * d;
  MatrixX<Scalar> L = MatrixX<Scalar>::Zero(dn, dn);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edge(k);
    const MatrixX<Scalar> P = projection_matrix(block(g, k, d));  // idempotent: PᵀP = P
    L.block(e.from * d, e.from * d, d, d) += P;
    L.block(e.to * d, e.to * d, d, d) += P;
    L.block(e.from * d, e.to * d, d, d) -= P;
    L.block(e.to * d, e.from * d, d, d) -= P;
  }
  return L;
}

template <typename Scalar>
struct GroundedBlocks {
  MatrixX<Scalar> ff;  // d(n-l) × d(n-l)
  MatrixX<Scalar> fl;  // d(n-l) × dl
};

/// Follower/leader partition of a bearing Laplacian with leaders first.
template <typename Derived>
GroundedBlocks<typename Derived::Scalar> grounded_blocks(const Eigen::MatrixBase<Derived>& L,
                                                         int d, int leaders) {
  const Index n = L.rows() / d;
  if (leaders < 2 || leaders > n - 1)
    throw Error(ErrorKind::BadLeaderCount,
                "leader count " + std::to_string(leaders) + " outside [2, n-1]");
  const Index dl = static_cast<Index>(leaders) * d;
  const Index df = L.rows() - dl;
  return {L.bottomRightCorner(df, df), L.bottomLeftCorner(df, dl)};
}

struct RigidityReport {
  bool rigid = false;
  int rank = 0;
  int expected_rank = 0;                // dn - d - 1
  double sigma_max = 0.0;
  double last_nonzero = 0.0;            // smallest singular value counted as nonzero
  double first_zero = 0.0;              // largest singular value counted as zero
  double gap = 0.0;                     // last_nonzero / first_zero (inf when no zero values)
  std::vector<double> singular_values;  // descending
};

/// Numerical rank of a matrix: singular values > rel_tol · σ_max.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& A, double rel_tol = kRankTol) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == Scalar(0)) return 0;
  int r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > Scalar(rel_tol) * s(0)) ++r;
  return r;
}

template <typename Derived>
RigidityReport is_infinitesimally_bearing_rigid(const FormationGraph& graph,
                                                const Eigen::MatrixBase<Derived>& p, int d,
                                                double rel_tol = kRankTol,
                                                double coincidence_tol = kCoincidenceTol) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> R = rigidity_matrix(graph, p, d, coincidence_tol);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(R);
  const auto& s = svd.singularValues();

  RigidityReport report;
  report.expected_rank = graph.vertex_count() * d - d - 1;
  report.singular_values.reserve(static_cast<std::size_t>(s.size()));
  for (Index i = 0; i < s.size(); ++i)
    report.singular_values.push_back(static_cast<double>(s(i)));
  // rank-deficient tall matrices have fewer singular values than columns
  for (Index i = s.size(); i < R.cols(); ++i) report.singular_values.push_back(0.0);

  report.sigma_max = report.singular_values.empty() ? 0.0 : report.singular_values.front();
  for (double v : report.singular_values)
    if (v > rel_tol * report.sigma_max) ++report.rank;
  const auto r = static_cast<std::size_t>(report.rank);
  report.last_nonzero = r > 0 ? report.singular_values[r - 1] : 0.0;
  report.first_zero = r < report.singular_values.size() ? report.singular_values[r] : 0.0;
  report.gap = report.first_zero > 0.0 ? report.last_nonzero / report.first_zero
                                       : std::numeric_limits<double>::infinity();
  report.rigid = report.rank == report.expected_rank;
  return report;
}

/// Smallest eigenvalue of a symmetric matrix.
template <typename Derived>
typename Derived::Scalar lambda_min(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Derived>
typename Derived::Scalar lambda_max(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Minimum distance over all agent pairs (not just edges).
template <typename Derived>
typename Derived::Scalar min_pairwise_distance(const Eigen::MatrixBase<Derived>& p, int d) {
  using Scalar = typename Derived::Scalar;
  const Index n = p.size() / d;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      best = std::min<Scalar>(best, (block(p, i, d) - block(p, j, d)).norm());
  return best;
}

template <typename Derived>
typename Derived::Scalar max_pairwise_distance(const Eigen::MatrixBase<Derived>& p, int d) {
  using Scalar = typename Derived::Scalar;
  const Index n = p.size() / d;
  Scalar best = Scalar(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      best = std::max<Scalar>(best, (block(p, i, d) - block(p, j, d)).norm());
  return best;
}

/// p̄ = (1/n) Σ p_i.
template <typename Derived>
VectorX<typename Derived::Scalar> centroid(const Eigen::MatrixBase<Derived>& p, int d) {
  const Index n = p.size() / d;
  return p.derived().reshaped(d, n).rowwise().mean();
}

}  // namespace bearing
