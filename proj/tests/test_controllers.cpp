#include "doctest.h"

#include "bearing/controllers.hpp"
#include "bearing/formations.hpp"
#include "bearing/sim.hpp"
#include "support.hpp"

using namespace bearing;
using doctest::Approx;

namespace {

Eigen::Vector2d follower_block(const Eigen::VectorXd& u) { return u.segment(4, 2); }

}  // namespace

TEST_CASE("sign function") {
  const Eigen::Vector3d x(-2, 0, 0.5);
  CHECK(sign_fn(x) == Eigen::VectorXd(Eigen::Vector3d(-1, 0, 1)));
  const Eigen::VectorXd s = sign_fn(x, SignMode::smooth(0.1));
  CHECK(s(0) == Approx(std::tanh(-20.0)));
  CHECK(s(1) == 0.0);
  CHECK(s(2) == Approx(std::tanh(5.0)));
}

TEST_CASE("adaptive law on the toy problem") {
  const TargetFormation t = test::toy_target();
  const ControlOutput out =
      disp_adaptive(t, test::toy_positions(1, 0.3), {Eigen::VectorXd::Ones(3)}, 1.0);
  CHECK(follower_block(out.u).isApprox(Eigen::Vector2d(0, -1)));
  CHECK(out.u.head(4).isZero());
  // edge 1-3 carries ‖q‖₁ = 0.3, the other two edges see no error
  CHECK(out.gain_derivative(1) == Approx(0.3));
  CHECK(out.gain_derivative(0) == 0.0);
  CHECK(out.gain_derivative(2) == 0.0);
}

TEST_CASE("proportional plus signum law on the toy problem") {
  const TargetFormation t = test::toy_target();
  const ControlOutput out =
      disp_prop_signum(t, test::toy_positions(1, 0.3), {Eigen::VectorXd::Ones(3)}, 1.0, 1.0);
  CHECK((follower_block(out.u) - Eigen::Vector2d(0, -1.3)).norm() < 1e-14);
}

TEST_CASE("polynomial law agrees with a direct evaluation") {
  const TargetFormation t = test::toy_target();
  const Eigen::VectorXd p = test::toy_positions(1, 2);
  PolyGainState state{1, Eigen::MatrixXd::Ones(2, 3)};
  const ControlOutput out = poly_adaptive(t, p, state, 1);

  // oracle: follower error against agent 1 is (0, 2) after projection
  const Eigen::Vector2d q = Eigen::Vector2d(0, 1).asDiagonal() * (p.segment(4, 2) - p.head(2));
  const double a = q.lpNorm<1>();
  const double gamma = 1.0 + a;
  CHECK(gamma == Approx(3.0));
  CHECK(follower_block(out.u).isApprox(-gamma * Eigen::Vector2d(0, 1)));
  const Eigen::MatrixXd rates = out.gain_derivative.reshaped(3, 2).transpose();
  CHECK(rates(0, 1) == Approx(2.0));
  CHECK(rates(1, 1) == Approx(4.0));
  CHECK(rates.col(0).isZero());

  PolyGainState wrong{2, Eigen::MatrixXd::Ones(3, 3)};
  CHECK_THROWS_AS(poly_adaptive(t, p, wrong, 1), Error);
}

TEST_CASE("bearing-only law pushes the toy follower down") {
  const TargetFormation t = test::toy_target();
  const Eigen::VectorXd p = test::toy_positions(1, 0.3);
  const ControlOutput out =
      bearing_only_adaptive(t, p, {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)});
  CHECK(out.u(5) < 0.0);
  const Eigen::VectorXd r = bearing_residual(t, p);
  // r_3 = g*_31 − g_31
  const Eigen::Vector2d g31 = (p.head(2) - p.segment(4, 2)).normalized();
  CHECK((r.segment(4, 2) - (Eigen::Vector2d(-1, 0) - g31)).norm() < 1e-14);
  CHECK(out.gain_derivative(0) == Approx(r.segment(4, 2).lpNorm<1>()));
}

TEST_CASE("leader tracking") {
  const Eigen::VectorXd u = leader_tracking(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d::Zero(), 1.0, 2.0);
  CHECK(u.isApprox(Eigen::Vector3d(-3, 0, 0)));
}

TEST_CASE("every law vanishes at the target") {
  const Formation f = dodecahedron();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  const Eigen::VectorXd& p = t.full();
  const int m = f.graph.edge_count();
  const int nf = f.graph.follower_count();
  const std::vector<ControlLaw> laws{
      DispAdaptiveLaw{1.0},
      DispPropSignumLaw{1.0, 1.0},
      DispLeakageLaw{1.0, 0.05, 0.5},
      PolyAdaptiveLaw{2},
      BearingOnlyAdaptiveLaw{Eigen::VectorXd::Ones(nf)},
      BearingOnlyLeakageLaw{1.0, 0.05, 0.5},
  };
  for (const ControlLaw& law : laws) {
    const Eigen::VectorXd gains = Eigen::VectorXd::Ones(gain_size(law, f.graph));
    const ControlOutput out = evaluate(law, t, p, gains);
    CHECK(out.u.norm() < 1e-9);
    if (!has_leakage(law)) CHECK(out.gain_derivative.norm() < 1e-9);
  }
  CHECK(gain_size(laws[0], f.graph) == m);
  CHECK(gain_size(laws[3], f.graph) == 3 * m);
  CHECK(gain_size(laws[4], f.graph) == nf);
}

TEST_CASE("projected errors are invariant to translation of the whole formation") {
  const Formation f = dodecahedron();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  std::mt19937_64 rng(43);
  const Eigen::VectorXd p = t.full() + 0.3 * test::random_config(rng, 20, 3, 0.0);
  const Eigen::VectorXd shift = Eigen::Vector3d(4, -1, 2).replicate(20, 1);
  CHECK((projected_errors(t, p) - projected_errors(t, p + shift)).norm() < 1e-12);
}

TEST_CASE("leakage drives gains down at the target as exp(-kappa alpha t)") {
  const Formation f = k4_square();
  const TargetFormation t = TargetFormation::from_configuration(f.graph, f.configuration);
  const double kappa = 2.0;
  const double alpha = 0.1;
  SimulationProblem prob{t,
                         DispLeakageLaw{kappa, alpha, 0.5},
                         t.full(),
                         Eigen::VectorXd::Ones(6),
                         {},
                         {},
                         NoLeaderMotion{},
                         KinematicLeaders{},
                         {}};
  prob.settings.dt = 1e-2;
  prob.settings.scheme = Scheme::RK4;
  prob.settings.horizon = 5.0;
  const RunResult r = run(prob);
  REQUIRE(r.ok());
  for (Index k = 0; k < 6; ++k)
    CHECK(r.final_state.gains(k) == Approx(std::exp(-kappa * alpha * 5.0)).epsilon(1e-9));
}
