#include "doctest.h"

#include "bearing/analysis.hpp"
#include "bearing/formations.hpp"
#include "bearing/rigidity.hpp"
#include "support.hpp"

using namespace bearing;
using doctest::Approx;

TEST_CASE("bearing of simple displacements") {
  const Eigen::Vector2d g = bearing::bearing(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 4));
  CHECK(g(0) == Approx(0.6).epsilon(1e-15));
  CHECK(g(1) == Approx(0.8).epsilon(1e-15));

  const Eigen::Vector3d h = bearing::bearing(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 2));
  CHECK(h.isApprox(Eigen::Vector3d(0, 0, 1)));

  CHECK_THROWS_AS(bearing::bearing(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1)), CoincidentAgentsError);
}

TEST_CASE("bearings are odd under endpoint swap") {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd p = test::random_config(rng, 2, 3);
  const Eigen::VectorXd a = bearing::bearing(p.head(3), p.tail(3));
  const Eigen::VectorXd b = bearing::bearing(p.tail(3), p.head(3));
  CHECK((a + b).norm() < 1e-15);
  CHECK(a.norm() == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projection matrices") {
  const Eigen::MatrixXd P = projection_matrix(Eigen::Vector3d(1, 0, 0));
  CHECK(P.isApprox(Eigen::Vector3d(0, 1, 1).asDiagonal().toDenseMatrix()));

  Eigen::Matrix2d expected;
  expected << 0.64, -0.48, -0.48, 0.36;
  CHECK((projection_matrix(Eigen::Vector2d(0.6, 0.8)) - expected).norm() < 1e-14);

  CHECK_THROWS_AS(projection_matrix(Eigen::Vector2d(1, 1)), Error);
}

TEST_CASE("projection properties on random bearings") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Vector3d g(n01(rng), n01(rng), n01(rng));
    g.normalize();
    const Eigen::MatrixXd P = projection_matrix(g);
    CHECK((P - P.transpose()).norm() < 1e-14);
    CHECK((P * P - P).norm() < 1e-14);
    CHECK((P * g).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    CHECK(es.eigenvalues()(0) == Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(es.eigenvalues()(1) == Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(2) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rigidity matrix matches the Kronecker oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const FormationGraph g = test::random_graph(rng, 6, 2, 0.5);
    const Eigen::VectorXd p = test::random_config(rng, 6, d);
    CHECK((rigidity_matrix(g, p, d) - test::rigidity_oracle(g, p, d, true)).norm() < 1e-12);
    const Eigen::VectorXd gs = bearing_stack(g, p, d);
    CHECK((augmented_rigidity_matrix(g, gs, d) - test::rigidity_oracle(g, p, d, false)).norm() <
          1e-12);
  }
}

TEST_CASE("rigidity matrix kernel contains translations and scaling") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 4 + trial % 4;
    const FormationGraph g = test::random_graph(rng, n, 2, 0.4);
    const Eigen::VectorXd p = test::random_config(rng, n, d);
    const Eigen::MatrixXd R = rigidity_matrix(g, p, d);
    for (int axis = 0; axis < d; ++axis) {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(n * d);
      for (int i = 0; i < n; ++i) t(i * d + axis) = 1.0;
      CHECK((R * t).norm() < 1e-12);
    }
    CHECK((R * p).norm() < 1e-12 * p.norm());
  }
}

TEST_CASE("rigidity matrix equals the finite-difference Jacobian of the bearings") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const FormationGraph g = test::random_graph(rng, 5, 2, 0.5);
    const Eigen::VectorXd p = test::random_config(rng, 5, d, 0.5);
    const Eigen::MatrixXd R = rigidity_matrix(g, p, d);
    const Eigen::MatrixXd J = fd_jacobian_oracle(g, p, d, 1e-6);
    CHECK((R - J).norm() <= 1e-6 * R.norm());
  }
}

TEST_CASE("finite-difference Jacobian has the edge block structure") {
  std::mt19937_64 rng(29);
  const FormationGraph g = test::random_graph(rng, 5, 2, 0.3);
  const Eigen::VectorXd p = test::random_config(rng, 5, 3, 0.5);
  const Eigen::MatrixXd J = fd_jacobian_oracle(g, p, 3);
  for (int k = 0; k < g.edge_count(); ++k) {
    const Edge e = g.edge(k);
    CHECK((J.block(k * 3, e.from * 3, 3, 3) + J.block(k * 3, e.to * 3, 3, 3)).norm() < 1e-8);
    for (int i = 0; i < 5; ++i)
      if (i != e.from && i != e.to) CHECK(J.block(k * 3, i * 3, 3, 3).norm() == 0.0);
  }
}

TEST_CASE("augmented rigidity matrix annihilates the generating configuration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const FormationGraph g = test::random_graph(rng, 6, 2, 0.5);
    const Eigen::VectorXd p = test::random_config(rng, 6, d);
    const Eigen::MatrixXd Rt = augmented_rigidity_matrix(g, bearing_stack(g, p, d), d);
    CHECK((Rt * p).norm() < 1e-12 * p.norm());
    CHECK(numerical_rank(Rt, kRankTol) == numerical_rank(rigidity_matrix(g, p, d), kRankTol));
  }
}

TEST_CASE("bearing Laplacian is symmetric PSD and equals R̃ᵀR̃") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const FormationGraph g = test::random_graph(rng, 6, 2, 0.5);
    const Eigen::VectorXd p = test::random_config(rng, 6, d);
    const Eigen::VectorXd gs = bearing_stack(g, p, d);
    const Eigen::MatrixXd L = bearing_laplacian(g, gs, d);
    const Eigen::MatrixXd Rt = test::rigidity_oracle(g, p, d, false);
    CHECK((L - L.transpose()).norm() == 0.0);
    CHECK((L - Rt.transpose() * Rt).norm() < 1e-12);
    CHECK(lambda_min(L) > -1e-12);
  }
}

TEST_CASE("triangle Laplacian has a three-dimensional kernel") {
  const FormationGraph g(3, 2, {{0, 1}, {0, 2}, {1, 2}});
  Eigen::VectorXd p(6);
  p << 0, 0, 1, 0, 0, 1;
  const Eigen::MatrixXd L = bearing_laplacian(g, bearing_stack(g, p, 2), 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  int zeros = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < 1e-12) ++zeros;
  CHECK(zeros == 3);
}

TEST_CASE("grounded blocks partition the Laplacian") {
  const Formation f = k4_square();
  const Eigen::MatrixXd L = bearing_laplacian(f.graph, bearing_stack(f.graph, f.configuration.positions, 2), 2);
  const auto blocks = grounded_blocks(L, 2, 2);
  CHECK(blocks.ff.rows() == 4);
  CHECK(blocks.ff.cols() == 4);
  CHECK(blocks.fl.rows() == 4);
  CHECK(blocks.fl.cols() == 4);
  Eigen::MatrixXd rebuilt(8, 8);
  rebuilt.topLeftCorner(4, 4) = L.topLeftCorner(4, 4);
  rebuilt.topRightCorner(4, 4) = blocks.fl.transpose();
  rebuilt.bottomLeftCorner(4, 4) = blocks.fl;
  rebuilt.bottomRightCorner(4, 4) = blocks.ff;
  CHECK(rebuilt == L);
  CHECK_THROWS_AS(grounded_blocks(L, 2, 1), Error);
  CHECK_THROWS_AS(grounded_blocks(L, 2, 4), Error);
}

TEST_CASE("rigidity test on small frameworks") {
  const FormationGraph triangle(3, 2, {{0, 1}, {0, 2}, {1, 2}});
  Eigen::VectorXd p(6);
  p << 0, 0, 1, 0, 0, 1;
  const RigidityReport tri = is_infinitesimally_bearing_rigid(triangle, p, 2);
  CHECK(tri.rigid);
  CHECK(tri.rank == 3);
  CHECK(tri.expected_rank == 3);

  const FormationGraph path(3, 2, {{0, 1}, {1, 2}});
  Eigen::VectorXd q(6);
  q << 0, 0, 1, 0, 2, 0;
  const RigidityReport line = is_infinitesimally_bearing_rigid(path, q, 2);
  CHECK_FALSE(line.rigid);
  CHECK(line.rank < line.expected_rank);

  const Formation sq = k4_square();
  CHECK(is_infinitesimally_bearing_rigid(sq.graph, sq.configuration.positions, 2).rigid);
}

TEST_CASE("dodecahedron framework is infinitesimally bearing rigid") {
  const Formation f = dodecahedron();
  CHECK(f.graph.vertex_count() == 20);
  CHECK(f.graph.edge_count() == 39);
  CHECK(f.graph.leader_count() == 3);
  const RigidityReport rep = is_infinitesimally_bearing_rigid(f.graph, f.configuration.positions, 3);
  CHECK(rep.rigid);
  CHECK(rep.rank == 56);
  CHECK(rep.gap > 1e6);
}

TEST_CASE("dodecahedron vertices lie on the circumsphere") {
  const Formation f = dodecahedron(2.0);
  const Eigen::VectorXd& p = f.configuration.positions;
  for (int i = 0; i < 20; ++i)
    CHECK(p.segment(3 * i, 3).norm() == Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}
