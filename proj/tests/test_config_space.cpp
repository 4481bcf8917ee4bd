#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "kplab/config_space.hpp"
#include "kplab/errors.hpp"
#include "kplab/rng.hpp"

using namespace kplab;

namespace {

PointConfiguration two_points_1d(double a, double b) {
  Eigen::MatrixXd pts(2, 1);
  pts << a, b;
  return PointConfiguration::uniform(1, pts);
}

}  // namespace

TEST_CASE("configuration validation accepts minimal and symmetric inputs") {
  const PointConfiguration singleton = validate_configuration(1, {{0.0}}, {1.0});
  CHECK(singleton.dim() == 1);
  CHECK(singleton.size() == 1);
  CHECK(singleton.weights()(0) == doctest::Approx(1.0).epsilon(1e-15));

  const PointConfiguration pair =
      validate_configuration(2, {{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5});
  CHECK(pair.size() == 2);
  CHECK(pair.points()(1, 0) == 1.0);
}

TEST_CASE("weight sum far from one is rejected") {
  CHECK_THROWS_AS(validate_configuration(2, {{0.0, 0.0}}, {0.4}),
                  NonPositiveWeightSum);
  CHECK_THROWS_AS(validate_configuration(1, {{0.0}}, {-1.0}),
                  NonPositiveWeightSum);
}

TEST_CASE("weights within rounding of one are renormalized exactly") {
  const PointConfiguration c =
      validate_configuration(1, {{0.0}, {1.0}}, {0.5, 0.5 + 1e-12});
  CHECK(c.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("shape mismatches are rejected") {
  CHECK_THROWS_AS(validate_configuration(2, {{0.0}}, {1.0}), Error);
  CHECK_THROWS_AS(validate_configuration(1, {{0.0}, {1.0}}, {1.0}), Error);
  Eigen::MatrixXd pts(0, 1);
  CHECK_THROWS_AS(PointConfiguration::uniform(1, pts), Error);
}

TEST_CASE("padding appends zero coordinates and keeps weights") {
  const PointConfiguration c = two_points_1d(-1.0, 1.0);
  const PointConfiguration padded = c.padded_to(3);
  CHECK(padded.dim() == 3);
  CHECK(padded.points()(0, 0) == -1.0);
  CHECK(padded.points()(0, 1) == 0.0);
  CHECK(padded.points()(1, 2) == 0.0);
  CHECK(padded.weights()(0) == c.weights()(0));
}

TEST_CASE("identity map has Lipschitz bound one") {
  const PointConfiguration c = two_points_1d(0.0, 1.0);
  const ContractionPair pair = make_contraction_pair(c, c);
  CHECK(pair.lipschitz_bound() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("homothety by one half has Lipschitz bound one half") {
  Eigen::MatrixXd src(3, 2);
  src << 0.0, 0.0, 2.0, 1.0, -1.0, 3.0;
  const PointConfiguration source = PointConfiguration::uniform(2, src);
  const PointConfiguration target =
      PointConfiguration::uniform(2, Eigen::MatrixXd(0.5 * src));
  const ContractionPair pair = make_contraction_pair(source, target);
  CHECK(pair.lipschitz_bound() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expanding pair is rejected with the offending ratio") {
  const PointConfiguration source = two_points_1d(0.0, 1.0);
  const PointConfiguration target = two_points_1d(0.0, 2.0);
  try {
    make_contraction_pair(source, target);
    FAIL("expected NotAContraction");
  } catch (const NotAContraction& e) {
    CHECK(e.ratio == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("coincident sources with distinct targets are rejected") {
  const PointConfiguration source = two_points_1d(1.0, 1.0);
  const PointConfiguration target = two_points_1d(0.0, 0.5);
  CHECK_THROWS_AS(make_contraction_pair(source, target), InconsistentCollapse);
}

TEST_CASE("coincident sources with coincident targets are fine") {
  const PointConfiguration source = two_points_1d(1.0, 1.0);
  const PointConfiguration target = two_points_1d(-2.0, -2.0);
  const ContractionPair pair = make_contraction_pair(source, target);
  CHECK(pair.lipschitz_bound() <= 1.0);
}

TEST_CASE("mismatched weights between source and target are rejected") {
  const PointConfiguration source = two_points_1d(0.0, 1.0);
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 0.5;
  Eigen::VectorXd w(2);
  w << 0.25, 0.75;
  const PointConfiguration target(1, pts, w);
  CHECK_THROWS_AS(make_contraction_pair(source, target), Error);
}

TEST_CASE("ball projection fixes interior points and is 1-Lipschitz") {
  Eigen::VectorXd center(2), inside(2), outside(2);
  center << 0.0, 0.0;
  inside << 0.3, -0.2;
  outside << 3.0, 4.0;
  const Eigen::VectorXd pi = project_to_ball(inside, center, 1.0);
  CHECK((pi - inside).norm() == 0.0);
  const Eigen::VectorXd po = project_to_ball(outside, center, 1.0);
  CHECK(po.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(po(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(po(1) == doctest::Approx(0.8).epsilon(1e-12));

  // 1-Lipschitz on random pairs.
  CounterRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(2), b(2);
    for (int j = 0; j < 2; ++j) {
      a(j) = 6.0 * rng.uniform(trial, j) - 3.0;
      b(j) = 6.0 * rng.uniform(trial, 2 + j) - 3.0;
    }
    const double before = (a - b).norm();
    const double after =
        (project_to_ball(a, center, 1.0) - project_to_ball(b, center, 1.0)).norm();
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("half-space projection moves violating points onto the boundary") {
  Eigen::VectorXd normal(2);
  normal << 1.0, 0.0;
  Eigen::VectorXd x(2);
  x << 2.0, 5.0;
  // Half-space {⟨n, y⟩ ≤ 1}.
  const Eigen::VectorXd p = project_to_halfspace(x, normal, 1.0);
  CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(5.0).epsilon(1e-12));
  Eigen::VectorXd ok(2);
  ok << 0.5, -3.0;
  CHECK((project_to_halfspace(ok, normal, 1.0) - ok).norm() == 0.0);
}

TEST_CASE("folding reflects the positive side onto the negative side") {
  Eigen::VectorXd normal(1);
  normal << 1.0;
  Eigen::VectorXd plus(1), minus(1);
  plus << 1.0;
  minus << -1.0;
  CHECK(fold_across_hyperplane(plus, normal, 0.0)(0) ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(fold_across_hyperplane(minus, normal, 0.0)(0) ==
        doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("random contractions are valid and deterministic per seed") {
  Eigen::MatrixXd src(4, 2);
  src << 0.0, 0.0, 2.0, 1.0, -1.0, 2.0, 1.5, -1.5;
  const PointConfiguration source = PointConfiguration::uniform(2, src);
  for (const ContractionMethod method :
       {ContractionMethod::Scaling, ContractionMethod::Projection,
        ContractionMethod::Composition, ContractionMethod::Folding}) {
    const ContractionPair a = random_contraction(source, method, 99);
    const ContractionPair b = random_contraction(source, method, 99);
    const ContractionPair c = random_contraction(source, method, 100);
    CHECK(a.lipschitz_bound() <= 1.0);
    CHECK((a.target().points() - b.target().points()).norm() == 0.0);
    // A different seed should move at least one method's output; scaling with
    // a different β always differs unless both drawn β are equal.
    if (method == ContractionMethod::Scaling) {
      CHECK((a.target().points() - c.target().points()).norm() > 0.0);
    }
    // Pairwise distances never increase (re-certified directly).
    for (int i = 0; i < source.size(); ++i) {
      for (int j = i + 1; j < source.size(); ++j) {
        const double ds =
            (source.points().row(i) - source.points().row(j)).norm();
        const double dt =
            (a.target().points().row(i) - a.target().points().row(j)).norm();
        CHECK(dt <= ds + 1e-9);
      }
    }
  }
}
