#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "kplab/config_space.hpp"

namespace kplab {

// Union of equal-radius closed balls.
class BallUnion {
 public:
  BallUnion(Eigen::MatrixXd centers, double radius);

  int dim() const { return static_cast<int>(centers_.cols()); }
  int size() const { return static_cast<int>(centers_.rows()); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  double radius() const { return radius_; }

 private:
  Eigen::MatrixXd centers_;
  double radius_;
};

// vol_n(B_r) = π^{n/2}·rⁿ / Γ(n/2 + 1).
double ball_volume(int dim, double radius);

struct VolumeEstimate {
  double volume = 0.0;
  double std_err = 0.0;
};

// Coverage-count estimator: sample a ball uniformly, a point uniformly
// inside it, and weight by k·vol(B)/(number of covering balls); unbiased
// for the union volume, with zero variance on disjoint unions.
VolumeEstimate union_volume_mc(const BallUnion& u, std::int64_t samples,
                               std::uint64_t seed);

enum class GeoVerdict { Consistent, InconsistentWithinNoise, Inconsistent };

std::string geo_verdict_name(GeoVerdict verdict);

struct GeoCheck {
  VolumeEstimate source;
  VolumeEstimate target;
  double gap = 0.0;  // vol_source − vol_target
  double combined_std_err = 0.0;
  GeoVerdict verdict = GeoVerdict::Consistent;
  // Whether the compared statement is a theorem for this instance (plane,
  // or any continuous contraction) or conjectural in general.
  std::string statement_status;
};

// Volume comparison for the union of radius-r balls around the source
// versus the target configuration.  Both unions reuse one sample stream
// (matched seeds), so identical pairs compare exactly equal.
GeoCheck kp_geometric_check(const ContractionPair& pair, double r,
                            std::int64_t samples, std::uint64_t seed);

}  // namespace kplab
