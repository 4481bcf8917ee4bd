#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "kplab/capacity.hpp"
#include "kplab/config_space.hpp"
#include "kplab/kp_verify.hpp"

using namespace kplab;

namespace {

PointConfiguration letters_1d(std::initializer_list<double> xs) {
  Eigen::MatrixXd pts(xs.size(), 1);
  Eigen::Index i = 0;
  for (const double x : xs) pts(i++, 0) = x;
  return PointConfiguration::uniform(1, pts);
}

QuadratureSpec coarse_grid() {
  QuadratureSpec spec;
  spec.points_per_axis = 2001;
  spec.padding_sigmas = 8.0;
  return spec;
}

}  // namespace

TEST_CASE("one letter carries no information") {
  const CapacityResult r =
      blahut_arimoto(letters_1d({3.0}), 1.0, 1e-6, 50, coarse_grid());
  CHECK(r.converged);
  CHECK(r.capacity == 0.0);
  CHECK(r.weights.size() == 1);
  CHECK(r.weights(0) == 1.0);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(blahut_arimoto(letters_1d({0.0, 1.0}), 0.0), Error);
  CHECK_THROWS_AS(blahut_arimoto(letters_1d({0.0, 1.0}), 1.0, 0.0), Error);
}

TEST_CASE("binary capacity matches a brute-force scan over input laws") {
  const PointConfiguration alphabet = letters_1d({-1.0, 1.0});
  const CapacityResult r =
      blahut_arimoto(alphabet, 1.0, 1e-6, 2000, coarse_grid());
  CHECK(r.converged);
  CHECK(r.upper - r.lower <= 1e-6 + 1e-12);

  EstimatorPolicy policy;
  policy.kind = PolicyKind::Quadrature;
  policy.grid = coarse_grid();
  double best = 0.0;
  for (int j = 1; j < 100; ++j) {
    Eigen::VectorXd w(2);
    w << j / 100.0, 1.0 - j / 100.0;
    best = std::max(best,
                    channel_mutual_information(alphabet, w, 1.0, policy));
  }
  CHECK(std::abs(r.capacity - best) <= 1e-3);
  // Symmetric channel: the optimum sits at the uniform law.
  CHECK(r.weights(0) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("iteration history is monotone and ends at the reported capacity") {
  const CapacityResult r =
      blahut_arimoto(letters_1d({-1.2, 0.3, 2.0}), 0.8, 1e-6, 2000,
                     coarse_grid());
  REQUIRE(!r.history.empty());
  for (std::size_t j = 1; j < r.history.size(); ++j) {
    CHECK(r.history[j].mutual_information >=
          r.history[j - 1].mutual_information - 1e-10);
    CHECK(r.history[j].bracket_width >= -1e-12);
  }
  CHECK(r.history.back().mutual_information == r.capacity);
  CHECK(r.lower == r.capacity);
  CHECK(r.lower <= r.upper + 1e-12);
  CHECK(r.weights.minCoeff() >= 0.0);
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("well-separated alphabets approach log of the alphabet size") {
  const CapacityResult two =
      blahut_arimoto(letters_1d({-8.0, 8.0}), 1.0, 1e-7, 2000, coarse_grid());
  CHECK(two.capacity == doctest::Approx(std::log(2.0)).epsilon(1e-4));
  QuadratureSpec wide = coarse_grid();
  wide.points_per_axis = 4001;
  const CapacityResult three =
      blahut_arimoto(letters_1d({-10.0, 0.0, 10.0}), 1.0, 1e-7, 2000, wide);
  CHECK(three.capacity == doctest::Approx(std::log(3.0)).epsilon(1e-4));
}

TEST_CASE("hitting the iteration cap reports converged = false") {
  // Asymmetric alphabet: the uniform starting law is not optimal, so one
  // iteration cannot close a 1e-12 bracket.  (A symmetric alphabet would
  // converge instantly because uniform weights are already exact there.)
  const CapacityResult r = blahut_arimoto(letters_1d({-1.2, 0.3, 2.0}), 1.0,
                                          1e-12, 1, coarse_grid());
  CHECK_FALSE(r.converged);
  CHECK(r.history.size() == 1);
  CHECK(r.capacity >= 0.0);
}

TEST_CASE("three-dimensional alphabets use the frozen-noise path deterministically") {
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 0.0, 0.0, 3.0, -1.0, 2.0;
  const PointConfiguration alphabet = PointConfiguration::uniform(3, pts);
  const CapacityResult a =
      blahut_arimoto(alphabet, 1.0, 1e-5, 200, {}, 8000, 42);
  const CapacityResult b =
      blahut_arimoto(alphabet, 1.0, 1e-5, 200, {}, 8000, 42);
  CHECK(a.capacity == b.capacity);
  CHECK(a.weights == b.weights);
  CHECK(a.history.size() == b.history.size());
  CHECK(a.capacity > 0.1);
  CHECK(a.capacity < std::log(2.0) + 0.1);
}

TEST_CASE("channel mutual information agrees with the mixture-based formula") {
  const PointConfiguration config = letters_1d({-1.0, 0.5, 2.0});
  EstimatorPolicy policy;
  policy.kind = PolicyKind::Quadrature;
  for (const double s : {0.5, 1.0, 2.5}) {
    const double via_channel =
        channel_mutual_information(config, config.weights(), s, policy);
    const double via_entropy = mutual_information(config, s, policy).value;
    CHECK(via_channel == doctest::Approx(via_entropy).epsilon(1e-9));
  }
}

TEST_CASE("collapsing an alphabet to one point kills its capacity") {
  Eigen::MatrixXd src(2, 1), dst(2, 1);
  src << -1.0, 1.0;
  dst << 0.0, 0.0;
  const ContractionPair pair =
      make_contraction_pair(PointConfiguration::uniform(1, src),
                            PointConfiguration::uniform(1, dst));
  const CapacityComparison cmp =
      capacity_contraction_check(pair, 1.0, 1e-6, coarse_grid());
  CHECK(cmp.target.capacity <= 1e-9);
  CHECK(cmp.source.capacity > 0.1);
  CHECK(cmp.gap > 0.1);
  CHECK(cmp.verdict == Verdict::Holds);
}

TEST_CASE("contracting an alphabet cannot raise capacity") {
  Eigen::MatrixXd src(3, 1);
  src << -2.0, 0.5, 2.5;
  const PointConfiguration source = PointConfiguration::uniform(1, src);
  const ContractionPair pair =
      random_contraction(source, ContractionMethod::Scaling, 7);
  const CapacityComparison cmp =
      capacity_contraction_check(pair, 1.0, 1e-5, coarse_grid());
  CHECK(cmp.verdict != Verdict::Violation);
  CHECK(cmp.gap >= -(1e-5 + 1e-5 + 1e-6));
  CHECK(cmp.pointwise_ok);
  CHECK(cmp.i_source_at_target_weights >=
        cmp.i_target_at_target_weights - 1e-9);
}
