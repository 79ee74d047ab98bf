#include "doctest.h"

#include "bearing/error.hpp"
#include "bearing/graph.hpp"
#include "bearing/rigidity.hpp"

using namespace bearing;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("incidence matrix of a path") {
  const Eigen::MatrixXd H = incidence_matrix<double>(FormationGraph(3, 2, {{0, 1}, {1, 2}}));
  Eigen::MatrixXd expected(2, 3);
  expected << -1, 1, 0, 0, -1, 1;
  CHECK(H == expected);
}

TEST_CASE("incidence matrix of a single edge") {
  const std::vector<Edge> edges{{0, 1}};
  const Eigen::MatrixXd H = incidence_matrix<double>(2, edges);
  CHECK(H.rows() == 1);
  CHECK(H(0, 0) == -1.0);
  CHECK(H(0, 1) == 1.0);
}

TEST_CASE("rows of H sum to zero") {
  const Eigen::MatrixXd H = incidence_matrix<double>(complete_graph(6, 2));
  CHECK(H.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  CHECK(H.rows() == 15);
}

TEST_CASE("lexicographic orientation puts the smaller index first") {
  const FormationGraph g(3, 2, {{2, 0}, {1, 0}, {2, 1}});
  for (const Edge& e : g.edges()) CHECK(e.from < e.to);
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge(1) == Edge{0, 2});
  CHECK(g.edge(2) == Edge{1, 2});

  const FormationGraph raw(3, 2, {{2, 0}, {1, 0}, {2, 1}}, Orientation::AsGiven);
  CHECK(raw.edge(0) == Edge{2, 0});
}

TEST_CASE("incidences record the sign of each endpoint") {
  const FormationGraph g(3, 2, {{0, 1}, {1, 2}});
  const auto inc = g.incidences(1);
  REQUIRE(inc.size() == 2);
  CHECK(inc[0].neighbor == 0);
  CHECK(inc[0].sign == 1.0);
  CHECK(inc[1].neighbor == 2);
  CHECK(inc[1].sign == -1.0);
}

TEST_CASE("graph validation") {
  CHECK(kind_of([] { FormationGraph(3, 1, {{0, 1}, {1, 2}}); }) == ErrorKind::BadLeaderCount);
  CHECK(kind_of([] { FormationGraph(3, 3, {{0, 1}, {1, 2}}); }) == ErrorKind::BadLeaderCount);
  CHECK(kind_of([] { FormationGraph(3, 2, {{0, 1}, {1, 0}, {1, 2}}); }) ==
        ErrorKind::InvalidGraph);
  CHECK(kind_of([] { FormationGraph(3, 2, {{0, 0}, {1, 2}}); }) == ErrorKind::InvalidGraph);
  CHECK(kind_of([] { FormationGraph(3, 2, {{0, 3}}); }) == ErrorKind::InvalidGraph);
  CHECK(kind_of([] { FormationGraph(4, 2, {{0, 1}, {2, 3}}); }) == ErrorKind::InvalidGraph);
}

TEST_CASE("complete graph") {
  const FormationGraph g = complete_graph(5, 2);
  CHECK(g.edge_count() == 10);
  CHECK(g.leader_count() == 2);
  CHECK(g.follower_count() == 3);
  CHECK(g.is_leader(1));
  CHECK_FALSE(g.is_leader(2));
}
