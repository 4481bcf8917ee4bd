#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "kplab/config_space.hpp"
#include "kplab/geo_volume.hpp"

using namespace kplab;

namespace {

Eigen::MatrixXd centers_2d(std::initializer_list<std::pair<double, double>> cs) {
  Eigen::MatrixXd m(cs.size(), 2);
  Eigen::Index i = 0;
  for (const auto& [x, y] : cs) {
    m(i, 0) = x;
    m(i, 1) = y;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("ball volumes match the closed forms") {
  CHECK(ball_volume(1, 3.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(ball_volume(2, 2.0) ==
        doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(ball_volume(3, 1.0) ==
        doctest::Approx(4.0 / 3.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(ball_volume(4, 1.0) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0)
            .epsilon(1e-14));
}

TEST_CASE("ball union construction validates input") {
  CHECK_THROWS_AS(BallUnion(Eigen::MatrixXd(0, 2), 1.0), EmptyConfiguration);
  CHECK_THROWS_AS(BallUnion(centers_2d({{0.0, 0.0}}), 0.0), Error);
  CHECK_THROWS_AS(union_volume_mc(BallUnion(centers_2d({{0.0, 0.0}}), 1.0),
                                  5000, 1),
                  Error);
}

TEST_CASE("a single ball is estimated exactly") {
  const BallUnion u(centers_2d({{0.7, -0.3}}), 1.3);
  const VolumeEstimate est = union_volume_mc(u, 20000, 9);
  CHECK(est.volume == doctest::Approx(ball_volume(2, 1.3)).epsilon(1e-14));
  CHECK(est.std_err == 0.0);  // every sample is covered exactly once
}

TEST_CASE("disjoint unions have zero estimator variance") {
  const BallUnion u(centers_2d({{-5.0, 0.0}, {5.0, 0.0}, {0.0, 7.0}}), 1.0);
  const VolumeEstimate est = union_volume_mc(u, 20000, 11);
  CHECK(est.volume ==
        doctest::Approx(3.0 * ball_volume(2, 1.0)).epsilon(1e-14));
  CHECK(est.std_err == 0.0);
}

TEST_CASE("coincident centers count as one ball") {
  const BallUnion u(centers_2d({{1.0, 1.0}, {1.0, 1.0}}), 0.8);
  const VolumeEstimate est = union_volume_mc(u, 20000, 13);
  CHECK(est.volume == doctest::Approx(ball_volume(2, 0.8)).epsilon(1e-14));
  CHECK(est.std_err == 0.0);
}

TEST_CASE("the two-disc union matches the lens closed form") {
  // Unit discs at distance 1: union area 2π − (2·acos(1/2) − (1/2)·√3).
  const double lens =
      2.0 * std::acos(0.5) - 0.5 * std::sqrt(4.0 - 1.0);
  const double exact = 2.0 * std::numbers::pi - lens;
  const BallUnion u(centers_2d({{0.0, 0.0}, {1.0, 0.0}}), 1.0);
  const VolumeEstimate est = union_volume_mc(u, 400000, 2024);
  REQUIRE(est.std_err > 0.0);
  CHECK(std::abs(est.volume - exact) <= 3.0 * est.std_err);
  CHECK(est.volume == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("replays are bit-identical and distinct seeds differ") {
  const BallUnion u(centers_2d({{0.0, 0.0}, {1.2, 0.4}}), 1.0);
  const VolumeEstimate a = union_volume_mc(u, 50000, 77);
  const VolumeEstimate b = union_volume_mc(u, 50000, 77);
  CHECK(a.volume == b.volume);
  CHECK(a.std_err == b.std_err);
  const VolumeEstimate c = union_volume_mc(u, 50000, 78);
  CHECK(a.volume != c.volume);
}

TEST_CASE("identical configurations compare exactly equal") {
  Eigen::MatrixXd pts = centers_2d({{0.0, 0.0}, {1.5, 0.2}, {-0.4, 1.1}});
  const ContractionPair pair =
      make_contraction_pair(PointConfiguration::uniform(2, pts),
                            PointConfiguration::uniform(2, pts));
  const GeoCheck check = kp_geometric_check(pair, 1.0, 50000, 5);
  CHECK(check.gap == 0.0);
  CHECK(check.verdict == GeoVerdict::Consistent);
  CHECK(check.source.volume == check.target.volume);
}

TEST_CASE("planar contractions shrink union volume consistently") {
  Eigen::MatrixXd src = centers_2d({{-1.6, 0.0}, {1.6, 0.3}, {0.2, 1.9}});
  const ContractionPair pair =
      make_contraction_pair(PointConfiguration::uniform(2, src),
                            PointConfiguration::uniform(2, 0.5 * src));
  const GeoCheck check = kp_geometric_check(pair, 1.1, 200000, 8);
  CHECK(check.gap >= 0.0);
  CHECK(check.verdict == GeoVerdict::Consistent);
  CHECK(check.statement_status.find("theorem in the plane") !=
        std::string::npos);
}

TEST_CASE("three-dimensional comparisons are labeled conjectural") {
  Eigen::MatrixXd src(2, 3);
  src << 0.0, 0.0, 0.0, 1.4, -0.6, 0.8;
  const ContractionPair pair =
      make_contraction_pair(PointConfiguration::uniform(3, src),
                            PointConfiguration::uniform(3, 0.6 * src));
  const GeoCheck check = kp_geometric_check(pair, 1.0, 100000, 3);
  CHECK(check.statement_status.find("conjectural") != std::string::npos);
  CHECK(check.verdict != GeoVerdict::Inconsistent);
}

TEST_CASE("sample budgets below ten thousand are rejected for comparisons") {
  Eigen::MatrixXd src = centers_2d({{0.0, 0.0}, {1.0, 0.0}});
  const ContractionPair pair =
      make_contraction_pair(PointConfiguration::uniform(2, src),
                            PointConfiguration::uniform(2, 0.5 * src));
  CHECK_THROWS_AS(kp_geometric_check(pair, 1.0, 9999, 1), Error);
}
