#include "doctest.h"

#include "bearing/formations.hpp"
#include "bearing/target.hpp"
#include "support.hpp"

using namespace bearing;
using doctest::Approx;

TEST_CASE("square followers reconstructed from two leaders") {
  const Formation f = k4_square();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  Eigen::VectorXd expected(4);
  expected << 1, 1, 0, 1;
  CHECK((t.followers() - expected).norm() < 1e-12);
  CHECK(t.lambda_min_ff() > 0.0);
  CHECK(t.bearing_consistency_residual() < 1e-12);
}

TEST_CASE("reconstruction from bearings alone") {
  const Formation f = k4_square();
  const Eigen::VectorXd g = bearing_stack(f.graph, f.configuration.positions, 2);
  const TargetFormation t = TargetFormation::from_bearings(
      f.graph, 2, f.configuration.positions.head(4), BearingSet::make(2, g));
  CHECK((t.full() - f.configuration.positions).norm() < 1e-12);
  CHECK_FALSE(t.generating_configuration().has_value());
}

TEST_CASE("smallest eigenvalue agrees with the oracle and Rayleigh sampling") {
  const Formation f = k4_square();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  const double oracle = test::lambda_min_oracle(f.graph, f.configuration.positions, 2);
  CHECK(t.lambda_min_ff() == Approx(oracle).epsilon(1e-12));

  std::mt19937_64 rng(41);
  std::normal_distribution<double> n01;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 200000; ++s) {
    Eigen::VectorXd x(4);
    for (Index k = 0; k < 4; ++k) x(k) = n01(rng);
    best = std::min(best, x.dot(t.L_ff() * x) / x.squaredNorm());
  }
  CHECK(best >= oracle - 1e-12);
  CHECK(best <= 1.05 * oracle);
}

TEST_CASE("followers are invariant to a common scale of the leaders") {
  const Formation f = dodecahedron();
  const TargetFormation a = TargetFormation::from_configuration(f.graph, f.configuration);
  const Eigen::VectorXd g = bearing_stack(f.graph, f.configuration.positions, 3);
  const TargetFormation b = TargetFormation::from_bearings(
      f.graph, 3, 2.5 * f.configuration.positions.head(9), BearingSet::make(3, g));
  CHECK((b.followers() - 2.5 * a.followers()).norm() < 1e-10);
  CHECK(a.lambda_min_ff() == Approx(b.lambda_min_ff()).epsilon(1e-12));
}

TEST_CASE("dodecahedron reconstruction and spectrum") {
  const Formation f = dodecahedron();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  CHECK((t.full() - f.configuration.positions).norm() < 1e-10);
  CHECK(t.lambda_min_ff() ==
        Approx(test::lambda_min_oracle(f.graph, f.configuration.positions, 3)).epsilon(1e-10));
  CHECK(t.lambda_min_ff() > 0.1);
}

TEST_CASE("non-localizable targets are rejected") {
  // a path leaves the second follower free to slide along its bearing
  const FormationGraph path(4, 2, {{0, 1}, {1, 2}, {2, 3}});
  Eigen::VectorXd p(8);
  p << 0, 0, 1, 0, 1, 1, 2, 1;
  try {
    TargetFormation::from_configuration(path, Configuration::make(2, p));
    FAIL("expected NotUniquelyLocalizable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotUniquelyLocalizable);
  }
}

TEST_CASE("configuration and bearing set validation") {
  Eigen::VectorXd p(4);
  p << 0, 0, 0, 0;
  CHECK_THROWS_AS(Configuration::make(2, p), CoincidentAgentsError);
  Eigen::VectorXd g(2);
  g << 1, 1;
  CHECK_THROWS_AS(BearingSet::make(2, g), Error);
}
