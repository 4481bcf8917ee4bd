#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/gauss_mixture.hpp"
#include "kplab/kp_verify.hpp"

namespace kplab {

// A configuration convolved with a variance-s0 Gaussian (s0 = 0 leaves it
// discrete), optionally pushed through a linear map of operator norm ≤ 1.
class SmoothedConfig {
 public:
  SmoothedConfig(PointConfiguration base, double s0);
  SmoothedConfig(PointConfiguration base, double s0, Eigen::MatrixXd map);

  const PointConfiguration& base() const { return base_; }
  double bandwidth() const { return s0_; }
  bool has_map() const { return map_.has_value(); }
  const Eigen::MatrixXd& map() const { return *map_; }
  double operator_norm() const { return operator_norm_; }

  // Density of X + √s·Z: centers with covariance (s0 + s)·I.
  GaussianMixture smoothed(double s) const;

 private:
  PointConfiguration base_;
  double s0_;
  std::optional<Eigen::MatrixXd> map_;
  double operator_norm_ = 1.0;
};

struct CostaReport {
  std::vector<double> s_grid;
  std::vector<double> entropy_power;             // N(s_j)
  std::vector<double> entropy_power_std_err;
  std::vector<double> second_difference;         // N_{j+1} − 2N_j + N_{j−1}
  std::vector<double> second_difference_std_err;
};

// Entropy power N(s) of X + √s·Z on a uniform s-grid, with discrete second
// differences (all ≤ 0 up to noise when the concavity theorem holds).
CostaReport costa_concavity_report(const SmoothedConfig& x,
                                   const std::vector<double>& s_grid,
                                   const EstimatorPolicy& policy);

struct ABetaSeries {
  std::vector<double> beta;
  std::vector<double> value;    // A(β) = N(βX + Z) − β²·N(X)
  std::vector<double> std_err;
};

// The monotone reformulation: A(β) is nondecreasing on [0, 1].  Requires
// s0 > 0 unless the caller opts into the N(X) = 0 convention for discrete X.
ABetaSeries a_beta_series(const SmoothedConfig& x,
                          const std::vector<double>& beta_grid,
                          const EstimatorPolicy& policy,
                          bool zero_bandwidth_ok = false);

struct UnifiedInequalityResult {
  double n_x_plus_z = 0.0;   // N(X + Z)
  double n_ax_plus_z = 0.0;  // N(AX + Z)
  double n_x = 0.0;          // N(X), 0 when s0 = 0
  double lipschitz = 1.0;    // operator norm of A
  double gap = 0.0;          // N(X+Z) − N(AX+Z) − (1−L²)·N(X)
  double std_err = 0.0;
  Verdict verdict = Verdict::Holds;
};

// N(X+Z) ≥ N(AX+Z) + (1−L²)·N(X) for a linear contraction A, with Z the
// standard Gaussian.  AX + Z has covariance s0·AAᵀ + I.
UnifiedInequalityResult unified_inequality_check(const SmoothedConfig& x,
                                                const EstimatorPolicy& policy);

}  // namespace kplab
