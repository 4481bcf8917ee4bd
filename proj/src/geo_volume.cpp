#include "kplab/geo_volume.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "kplab/errors.hpp"
#include "kplab/parallel.hpp"
#include "kplab/rng.hpp"

namespace kplab {

BallUnion::BallUnion(Eigen::MatrixXd centers, double radius)
    : centers_(std::move(centers)), radius_(radius) {
  if (centers_.rows() == 0) {
    throw EmptyConfiguration("a ball union needs at least one center");
  }
  if (centers_.cols() == 0) {
    throw DimensionMismatch("ball centers need a positive dimension");
  }
  if (!(radius_ > 0.0)) {
    throw Error("ball radius must be positive, got " + std::to_string(radius_));
  }
}

double ball_volume(int dim, double radius) {
  const double n = static_cast<double>(dim);
  return std::pow(std::numbers::pi, 0.5 * n) * std::pow(radius, n) /
         std::tgamma(0.5 * n + 1.0);
}

namespace {

// One coverage-count draw: the weight k·vol(B)/count for sample j.
double coverage_weight(const Eigen::MatrixXd& centers, double radius,
                       const CounterRng& rng, std::uint64_t j,
                       double k_vol_ball) {
  const int n = static_cast<int>(centers.cols());
  const int k = static_cast<int>(centers.rows());
  const std::uint64_t ball =
      rng.index(j, static_cast<std::uint64_t>(k),
                2 * static_cast<std::uint64_t>(n));
  // Uniform point in the ball: normal direction scaled by U^{1/n}·r.
  Eigen::VectorXd z(n);
  for (int a = 0; a < n; ++a) {
    z[a] = rng.normal(j, static_cast<std::uint64_t>(a));
  }
  const double norm = z.norm();
  const double u =
      rng.uniform(j, 2 * static_cast<std::uint64_t>(n) + 1);
  const double scale =
      norm > 0.0
          ? radius * std::pow(u, 1.0 / static_cast<double>(n)) / norm
          : 0.0;
  const Eigen::VectorXd x =
      centers.row(static_cast<Eigen::Index>(ball)).transpose() + scale * z;
  int count = 0;
  const double r2 = radius * radius;
  for (int c = 0; c < k; ++c) {
    if ((x.transpose() - centers.row(c)).squaredNorm() <= r2) {
      ++count;
    }
  }
  // The sampled point lies in its own ball, so count ≥ 1.
  return k_vol_ball / static_cast<double>(count);
}

VolumeEstimate estimate_union(const Eigen::MatrixXd& centers, double radius,
                              std::int64_t samples, std::uint64_t seed) {
  const CounterRng rng(seed);
  const double k_vol_ball =
      static_cast<double>(centers.rows()) *
      ball_volume(static_cast<int>(centers.cols()), radius);
  const std::size_t n_samples = static_cast<std::size_t>(samples);
  std::vector<double> w(n_samples);
  for_chunks(n_samples, 8192, [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      w[j] = coverage_weight(centers, radius, rng, j, k_vol_ball);
    }
  });
  Accumulator mean_acc;
  for (const double v : w) {
    mean_acc.add(v);
  }
  const double n_d = static_cast<double>(n_samples);
  const double mean = mean_acc.total() / n_d;
  Accumulator var_acc;
  for (const double v : w) {
    var_acc.add((v - mean) * (v - mean));
  }
  VolumeEstimate est;
  est.volume = mean;
  est.std_err = std::sqrt(var_acc.total() / (n_d - 1.0) / n_d);
  return est;
}

}  // namespace

VolumeEstimate union_volume_mc(const BallUnion& u, std::int64_t samples,
                               std::uint64_t seed) {
  if (samples < 10000) {
    throw Error("union volume needs at least 10^4 samples, got " +
                std::to_string(samples));
  }
  return estimate_union(u.centers(), u.radius(), samples, seed);
}

std::string geo_verdict_name(GeoVerdict verdict) {
  switch (verdict) {
    case GeoVerdict::Consistent:
      return "consistent";
    case GeoVerdict::InconsistentWithinNoise:
      return "inconsistent-within-noise";
    case GeoVerdict::Inconsistent:
      return "INCONSISTENT";
  }
  return "unknown";
}

GeoCheck kp_geometric_check(const ContractionPair& pair, double r,
                            std::int64_t samples, std::uint64_t seed) {
  if (samples < 10000) {
    throw Error("the volume comparison needs at least 10^4 samples, got " +
                std::to_string(samples));
  }
  const int common_dim = std::max(pair.source().dim(), pair.target().dim());
  const Eigen::MatrixXd source = pair.source().padded_to(common_dim).points();
  const Eigen::MatrixXd target = pair.target().padded_to(common_dim).points();
  GeoCheck check;
  // Matched seeds: both unions see the same ball picks and offsets.
  check.source = estimate_union(source, r, samples, seed);
  check.target = estimate_union(target, r, samples, seed);
  check.gap = check.source.volume - check.target.volume;
  check.combined_std_err =
      std::sqrt(check.source.std_err * check.source.std_err +
                check.target.std_err * check.target.std_err);
  if (check.gap >= 0.0) {
    check.verdict = GeoVerdict::Consistent;
  } else if (check.gap >=
             -std::max(1e-9, 3.0 * check.combined_std_err)) {
    check.verdict = GeoVerdict::InconsistentWithinNoise;
  } else {
    check.verdict = GeoVerdict::Inconsistent;
  }
  check.statement_status =
      common_dim <= 2
          ? "theorem in the plane; also a theorem for continuous contractions"
          : "conjectural in general; a theorem for continuous contractions";
  return check;
}

}  // namespace kplab
