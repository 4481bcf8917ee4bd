#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/flow.hpp"
#include "kplab/gauss_mixture.hpp"

using namespace kplab;

namespace {

PointConfiguration points_1d(std::vector<double> xs) {
  Eigen::MatrixXd pts(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts(i, 0) = xs[i];
  return PointConfiguration::uniform(1, pts);
}

ContractionPair sample_pair() {
  return make_contraction_pair(points_1d({-1.5, 0.0, 2.0}),
                               points_1d({-0.75, 0.0, 1.0}));
}

std::vector<double> grid21() {
  std::vector<double> g(21);
  for (int j = 0; j < 21; ++j) g[j] = j / 20.0;
  return g;
}

}  // namespace

TEST_CASE("lift interpolates source to target in doubled dimension") {
  const ContractionPair pair = sample_pair();
  const BezdekConnellyLift lift(pair);
  CHECK(lift.dim() == 2);
  CHECK(lift.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd p0 = lift.position(i, 0.0);
    CHECK(p0(0) == doctest::Approx(pair.source().points()(i, 0)).epsilon(1e-14));
    CHECK(p0(1) == doctest::Approx(0.0).epsilon(1e-14));
    const Eigen::VectorXd p1 = lift.position(i, 1.0);
    CHECK(p1(0) == doctest::Approx(pair.target().points()(i, 0)).epsilon(1e-14));
    CHECK(std::abs(p1(1)) < 1e-14);
  }
}

TEST_CASE("pairwise distances decrease monotonically along the lift") {
  const ContractionPair pair = sample_pair();
  const BezdekConnellyLift lift(pair);
  for (int i = 0; i < lift.size(); ++i) {
    for (int j = i + 1; j < lift.size(); ++j) {
      double prev = (lift.position(i, 0.0) - lift.position(j, 0.0)).norm();
      for (int step = 1; step <= 40; ++step) {
        const double t = step / 40.0;
        const double cur = (lift.position(i, t) - lift.position(j, t)).norm();
        CHECK(cur <= prev + 1e-12);
        prev = cur;
      }
    }
  }
  CHECK(validate_family(lift).ok);
}

TEST_CASE("analytic lift velocity matches finite differences") {
  const BezdekConnellyLift lift(sample_pair());
  for (const double t : {0.1, 0.35, 0.8}) {
    for (int i = 0; i < lift.size(); ++i) {
      const double h = 1e-6;
      const Eigen::VectorXd fd =
          (lift.position(i, t + h) - lift.position(i, t - h)) / (2.0 * h);
      CHECK((lift.velocity(i, t) - fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("expanding families fail validation") {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.5);
  const CurveFamily expanding(
      1, w,
      [](int i, double t) {
        Eigen::VectorXd x(1);
        x << (i == 0 ? -1.0 : 1.0) * (1.0 + t);
        return x;
      });
  const FlowValidation v = validate_family(expanding);
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.issue.empty());
}

TEST_CASE("merged trajectories must stay merged") {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.5);
  // Points meet at t = 1/2 and then separate again: not a valid contraction flow.
  const CurveFamily split(
      1, w,
      [](int i, double t) {
        Eigen::VectorXd x(1);
        const double sign = (i == 0) ? -1.0 : 1.0;
        x << sign * std::abs(t - 0.5);
        return x;
      });
  CHECK_FALSE(validate_family(split).ok);
}

TEST_CASE("posterior reproduces the Gaussian ratio oracle") {
  // Static family with centers {0, 2}; at x = 0, s = 1 the posterior odds are
  // exp((4 - 0)/2) = e^2, so p0 = e^2/(1 + e^2).
  Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.5);
  const CurveFamily family(
      1, w,
      [](int i, double) {
        Eigen::VectorXd x(1);
        x << (i == 0 ? 0.0 : 2.0);
        return x;
      });
  Eigen::VectorXd x(1);
  x << 0.0;
  const DiscretePosterior post = posterior(family, 0.3, x, 1.0);
  const double e2 = std::exp(2.0);
  CHECK(post.p(0) == doctest::Approx(e2 / (1.0 + e2)).epsilon(1e-12));
  CHECK(post.p(0) == doctest::Approx(0.8807970779778823).epsilon(1e-9));
  CHECK(post.p.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("convolved velocity is the posterior average of the velocities") {
  const BezdekConnellyLift lift(sample_pair());
  Eigen::VectorXd x(2);
  x << 0.4, -0.2;
  const double t = 0.3, s = 0.7;
  const DiscretePosterior post = posterior(lift, t, x, s);
  const Eigen::VectorXd v = convolved_velocity(post);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < lift.size(); ++i)
    direct += post.p(i) * lift.velocity(i, t);
  CHECK((v - direct).norm() < 1e-14);
  CHECK((convolved_velocity(lift, t, x, s) - v).norm() == 0.0);
}

TEST_CASE("divergence formula matches finite differences and is nonpositive") {
  const BezdekConnellyLift lift(sample_pair());
  const double s = 1.0;
  const GaussianMixture state = smoothed_state(lift, 0.45, s);
  for (int p = 0; p < 25; ++p) {
    const Eigen::VectorXd x = state.sample(77, p);
    const double div = convolved_divergence(lift, 0.45, x, s);
    CHECK(div <= 1e-12);
    double fd = 0.0;
    const double h = 1e-5;
    for (int d = 0; d < lift.dim(); ++d) {
      Eigen::VectorXd xp = x, xm = x;
      xp(d) += h;
      xm(d) -= h;
      fd += (convolved_velocity(lift, 0.45, xp, s)(d) -
             convolved_velocity(lift, 0.45, xm, s)(d)) /
            (2.0 * h);
    }
    CHECK(std::abs(div - fd) < 1e-6);
  }
}

TEST_CASE("divergence equals the hand-computed posterior covariance trace") {
  Eigen::VectorXd w(2);
  w << 0.4, 0.6;
  // Two points moving toward each other with constant velocities.
  const CurveFamily family(
      1, w,
      [](int i, double t) {
        Eigen::VectorXd x(1);
        x << (i == 0 ? -1.0 + 0.5 * t : 1.0 - 0.5 * t);
        return x;
      },
      [](int i, double) {
        Eigen::VectorXd v(1);
        v << (i == 0 ? 0.5 : -0.5);
        return v;
      });
  Eigen::VectorXd x(1);
  x << 0.2;
  const double s = 0.8, t = 0.25;
  const DiscretePosterior post = posterior(family, t, x, s);
  const double vbar = post.p(0) * 0.5 + post.p(1) * -0.5;
  const double cbar =
      post.p(0) * post.positions(0, 0) + post.p(1) * post.positions(1, 0);
  double expected = 0.0;
  expected += post.p(0) * (0.5 - vbar) * (post.positions(0, 0) - cbar);
  expected += post.p(1) * (-0.5 - vbar) * (post.positions(1, 0) - cbar);
  expected /= s;
  CHECK(convolved_divergence(post) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected < 0.0);  // approaching points: strictly contracting
}

TEST_CASE("smoothed state is the mixture at the current positions") {
  const BezdekConnellyLift lift(sample_pair());
  const GaussianMixture state = smoothed_state(lift, 0.6, 1.3);
  CHECK(state.dim() == lift.dim());
  CHECK((state.centers() - lift.positions(0.6)).norm() < 1e-14);
  CHECK(state.is_isotropic());
  CHECK(state.isotropic_variance() == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("quadratic functional series equals the closed-form path") {
  const BezdekConnellyLift lift(sample_pair());
  EstimatorPolicy policy;
  const auto series = functional_along_flow(
      lift, ConvexFunctionalSpec::power(2.0), 1.0, grid21(), policy);
  REQUIRE(series.size() == 21);
  for (std::size_t j = 0; j < series.size(); ++j) {
    const GaussianMixture state = smoothed_state(lift, grid21()[j], 1.0);
    const double expected = std::exp(-renyi_exact_integer(state, 2).value);
    CHECK(series[j].value == doctest::Approx(expected).epsilon(1e-12));
    if (j > 0) CHECK(series[j].value >= series[j - 1].value - 1e-10);
  }
}

TEST_CASE("xlogx and hockey-stick series are nondecreasing along the flow") {
  const BezdekConnellyLift lift(sample_pair());
  EstimatorPolicy policy;
  policy.grid.points_per_axis = 601;
  const auto xlogx = functional_along_flow(
      lift, ConvexFunctionalSpec::xlogx(), 1.0, grid21(), policy);
  for (std::size_t j = 1; j < xlogx.size(); ++j)
    CHECK(xlogx[j].value >= xlogx[j - 1].value - 1e-8);

  const auto hockey = functional_along_flow(
      lift, ConvexFunctionalSpec::hockey_stick(0.05), 1.0, grid21(), policy);
  for (std::size_t j = 1; j < hockey.size(); ++j)
    CHECK(hockey[j].value >=
          hockey[j - 1].value -
              std::max(1e-8, 3.0 * std::hypot(hockey[j].std_err,
                                              hockey[j - 1].std_err)));
}

TEST_CASE("hockey-stick quadrature and Monte Carlo estimators agree") {
  const BezdekConnellyLift lift(sample_pair());
  const std::vector<double> t{0.5};
  EstimatorPolicy quad;
  quad.kind = PolicyKind::Quadrature;
  const auto exact = functional_along_flow(
      lift, ConvexFunctionalSpec::hockey_stick(0.04), 1.0, t, quad);
  EstimatorPolicy mc;
  mc.kind = PolicyKind::MonteCarlo;
  mc.mc_samples = 60000;
  mc.seed = 5;
  const auto est = functional_along_flow(
      lift, ConvexFunctionalSpec::hockey_stick(0.04), 1.0, t, mc);
  REQUIRE(est.size() == 1);
  CHECK(est[0].std_err > 0.0);
  CHECK(std::abs(est[0].value - exact[0].value) <= 3.5 * est[0].std_err);
}

TEST_CASE("functional parameter validation") {
  CHECK_THROWS_AS(ConvexFunctionalSpec::power(1.0), Error);
  CHECK_THROWS_AS(ConvexFunctionalSpec::hockey_stick(0.0), Error);
  const BezdekConnellyLift lift(sample_pair());
  EstimatorPolicy policy;
  CHECK_THROWS_AS(functional_along_flow(lift, ConvexFunctionalSpec::power(2.0),
                                        1.0, {0.3, 0.2}, policy),
                  Error);  // grid must increase
  CHECK_THROWS_AS(functional_along_flow(lift, ConvexFunctionalSpec::power(2.0),
                                        1.0, {0.3, 1.2}, policy),
                  Error);  // grid must stay inside [0, 1]
}

TEST_CASE("pairwise velocity inner products are nonpositive for the lift") {
  const BezdekConnellyLift lift(sample_pair());
  CHECK(velocity_monotonicity_max(lift, grid21()) <= 1e-10);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.5);
  const CurveFamily expanding(
      1, w,
      [](int i, double t) {
        Eigen::VectorXd x(1);
        x << (i == 0 ? -1.0 : 1.0) * (1.0 + t);
        return x;
      });
  CHECK(velocity_monotonicity_max(expanding, grid21()) > 0.1);
}
