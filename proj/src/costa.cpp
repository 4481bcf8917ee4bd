#include "kplab/costa.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "kplab/rng.hpp"

namespace kplab {

namespace {

// Standard error of N = exp(2h/n) from the standard error of h.
double entropy_power_std_err(double power, int dim, double h_std_err) {
  return power * 2.0 / static_cast<double>(dim) * h_std_err;
}

struct PowerEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

PowerEstimate estimate_power(const GaussianMixture& m,
                             const EstimatorPolicy& policy) {
  const EntropyEstimate h = estimate_entropy(m, 1.0, policy);
  PowerEstimate out;
  out.value = std::exp(2.0 * h.value / static_cast<double>(m.dim()));
  out.std_err = entropy_power_std_err(out.value, m.dim(), h.std_err);
  return out;
}

}  // namespace

SmoothedConfig::SmoothedConfig(PointConfiguration base, double s0)
    : base_(std::move(base)), s0_(s0) {
  if (s0_ < 0.0) {
    throw Error("intrinsic bandwidth must be nonnegative, got " +
                std::to_string(s0_));
  }
}

SmoothedConfig::SmoothedConfig(PointConfiguration base, double s0,
                               Eigen::MatrixXd map)
    : SmoothedConfig(std::move(base), s0) {
  if (map.rows() != base_.dim() || map.cols() != base_.dim()) {
    throw DimensionMismatch("linear map must be " +
                            std::to_string(base_.dim()) + "x" +
                            std::to_string(base_.dim()));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
  operator_norm_ = svd.singularValues().maxCoeff();
  if (operator_norm_ > 1.0 + 1e-12) {
    throw OperatorNormExceeded("linear map has operator norm " +
                               std::to_string(operator_norm_) +
                               ", expected <= 1");
  }
  map_ = std::move(map);
}

GaussianMixture SmoothedConfig::smoothed(double s) const {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + std::to_string(s));
  }
  return GaussianMixture::isotropic(base_, s0_ + s);
}

CostaReport costa_concavity_report(const SmoothedConfig& x,
                                   const std::vector<double>& s_grid,
                                   const EstimatorPolicy& policy) {
  if (s_grid.size() < 3) {
    throw Error("the s-grid needs at least 3 points");
  }
  const double step = s_grid[1] - s_grid[0];
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    if (!(s_grid[j] > 0.0)) {
      throw Error("all s values must be positive");
    }
    if (j > 0 && std::abs(s_grid[j] - s_grid[j - 1] - step) >
                     1e-9 * std::max(1.0, std::abs(step))) {
      throw Error("second differences need a uniform s-grid");
    }
  }
  // One sample stream across the whole grid so stochastic wobble is shared
  // between neighbouring N(s) values instead of independent.
  EstimatorPolicy row = policy;
  row.seed = derive_seed(policy.seed, "costa-grid", 0);
  CostaReport report;
  report.s_grid = s_grid;
  for (const double s : s_grid) {
    const PowerEstimate np = estimate_power(x.smoothed(s), row);
    report.entropy_power.push_back(np.value);
    report.entropy_power_std_err.push_back(np.std_err);
  }
  for (std::size_t j = 1; j + 1 < s_grid.size(); ++j) {
    report.second_difference.push_back(report.entropy_power[j + 1] -
                                       2.0 * report.entropy_power[j] +
                                       report.entropy_power[j - 1]);
    const double se =
        std::sqrt(report.entropy_power_std_err[j + 1] *
                      report.entropy_power_std_err[j + 1] +
                  4.0 * report.entropy_power_std_err[j] *
                      report.entropy_power_std_err[j] +
                  report.entropy_power_std_err[j - 1] *
                      report.entropy_power_std_err[j - 1]);
    report.second_difference_std_err.push_back(se);
  }
  return report;
}

ABetaSeries a_beta_series(const SmoothedConfig& x,
                          const std::vector<double>& beta_grid,
                          const EstimatorPolicy& policy,
                          bool zero_bandwidth_ok) {
  if (x.bandwidth() == 0.0 && !zero_bandwidth_ok) {
    throw BandwidthRequired(
        "A(β) needs intrinsic bandwidth s0 > 0 for the N(βX) term; pass "
        "zero_bandwidth_ok to use the N(βX) = 0 convention");
  }
  for (const double beta : beta_grid) {
    if (beta < 0.0 || beta > 1.0) {
      throw Error("β values must lie in [0, 1]");
    }
  }
  EstimatorPolicy row = policy;
  row.seed = derive_seed(policy.seed, "a-beta", 0);
  // N(X) is β-independent; computed once.
  double n_x = 0.0;
  double n_x_se = 0.0;
  if (x.bandwidth() > 0.0) {
    const PowerEstimate base = estimate_power(
        GaussianMixture::isotropic(x.base(), x.bandwidth()), row);
    n_x = base.value;
    n_x_se = base.std_err;
  }
  ABetaSeries series;
  series.beta = beta_grid;
  for (const double beta : beta_grid) {
    // βX + Z: centers β·c_i, covariance (β²·s0 + 1)·I.
    const GaussianMixture m = GaussianMixture::isotropic(
        beta * x.base().points(), x.base().weights(),
        beta * beta * x.bandwidth() + 1.0);
    const PowerEstimate np = estimate_power(m, row);
    series.value.push_back(np.value - beta * beta * n_x);
    series.std_err.push_back(std::sqrt(np.std_err * np.std_err +
                                       beta * beta * beta * beta * n_x_se *
                                           n_x_se));
  }
  return series;
}

UnifiedInequalityResult unified_inequality_check(const SmoothedConfig& x,
                                                 const EstimatorPolicy& policy) {
  if (!x.has_map()) {
    throw Error("the unified inequality needs a linear map");
  }
  const int n = x.base().dim();
  EstimatorPolicy row = policy;
  row.seed = derive_seed(policy.seed, "unified", 0);
  UnifiedInequalityResult result;
  result.lipschitz = x.operator_norm();
  const PowerEstimate lhs = estimate_power(x.smoothed(1.0), row);
  result.n_x_plus_z = lhs.value;
  // AX + Z: centers A·c_i with covariance s0·AAᵀ + I.
  const Eigen::MatrixXd mapped_centers =
      x.base().points() * x.map().transpose();
  const Eigen::MatrixXd covariance =
      x.bandwidth() * x.map() * x.map().transpose() +
      Eigen::MatrixXd::Identity(n, n);
  const GaussianMixture mapped(mapped_centers, x.base().weights(), covariance);
  const PowerEstimate rhs = estimate_power(mapped, row);
  result.n_ax_plus_z = rhs.value;
  double n_x_se = 0.0;
  if (x.bandwidth() > 0.0) {
    const PowerEstimate base = estimate_power(
        GaussianMixture::isotropic(x.base(), x.bandwidth()), row);
    result.n_x = base.value;
    n_x_se = base.std_err;
  }
  const double slack = 1.0 - result.lipschitz * result.lipschitz;
  result.gap = result.n_x_plus_z - result.n_ax_plus_z - slack * result.n_x;
  result.std_err = std::sqrt(lhs.std_err * lhs.std_err +
                             rhs.std_err * rhs.std_err +
                             slack * slack * n_x_se * n_x_se);
  // Deterministic evaluations get a 1e-9 absolute floor so roundoff at the
  // equality cases (A = identity, Gaussian A = 0) is not flagged.
  result.verdict = gap_verdict(result.gap, result.std_err, 1e-9);
  return result;
}

}  // namespace kplab
