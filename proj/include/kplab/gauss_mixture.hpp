#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/errors.hpp"

namespace kplab {

// Mixture of Gaussians with one shared covariance: the density of X + √s Z
// for a weighted point configuration X (optionally pre-smoothed or linearly
// mapped, which is where non-isotropic covariances come from).
class GaussianMixture {
 public:
  GaussianMixture(Eigen::MatrixXd centers, Eigen::VectorXd weights,
                  Eigen::MatrixXd covariance);

  static GaussianMixture isotropic(const PointConfiguration& config, double s);
  static GaussianMixture isotropic(Eigen::MatrixXd centers,
                                   Eigen::VectorXd weights, double s);

  int dim() const { return static_cast<int>(centers_.cols()); }
  int components() const { return static_cast<int>(centers_.rows()); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  // True when the covariance is a positive multiple of the identity.
  bool is_isotropic() const { return isotropic_; }
  double isotropic_variance() const { return covariance_(0, 0); }

  const Eigen::MatrixXd& covariance_inverse() const { return inverse_; }
  double log_det_covariance() const { return log_det_; }
  // (n/2)·log(2π) + ½·log|Σ|, the per-component log-normalizer.
  double log_normalizer() const { return log_norm_; }
  double max_eigenvalue() const { return max_eigenvalue_; }

  double log_density(const Eigen::VectorXd& x) const;

  // Deterministic draw: the index-th sample of the stream identified by seed.
  // Safe to evaluate in any order (counter-based generator underneath).
  Eigen::VectorXd sample(std::uint64_t seed, std::uint64_t index) const;

 private:
  Eigen::MatrixXd centers_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd inverse_;
  Eigen::MatrixXd cholesky_lower_;
  Eigen::VectorXd log_weights_;
  Eigen::VectorXd cumulative_weights_;
  double log_det_ = 0.0;
  double log_norm_ = 0.0;
  double max_eigenvalue_ = 0.0;
  bool isotropic_ = false;
};

enum class EntropyMethod { ExactInteger, Quadrature, MonteCarlo, SupOptimization };

std::string method_name(EntropyMethod method);

// A Rényi-entropy value (nats) with enough metadata to re-derive it.
struct EntropyEstimate {
  double order = 1.0;  // α; +infinity selects the sup branch
  double value = 0.0;
  double std_err = 0.0;  // 0 for deterministic methods
  EntropyMethod method = EntropyMethod::Quadrature;
  std::string metadata;
  std::uint64_t seed = 0;  // meaningful only for Monte Carlo
};

struct QuadratureSpec {
  int points_per_axis = 4001;
  // Grid extent: centers' bounding box padded by this many standard
  // deviations (square root of the largest covariance eigenvalue) per side.
  double padding_sigmas = 8.0;
};

struct AxisGrid {
  double lo = 0.0;
  double step = 0.0;
  int count = 0;
  double at(int i) const { return lo + step * i; }
  // Composite-trapezoid weight of node i (includes the step factor).
  double weight(int i) const {
    return (i == 0 || i == count - 1) ? 0.5 * step : step;
  }
};

// Tensor-product grid covering the mixture per the QuadratureSpec.
std::vector<AxisGrid> quadrature_axes(const GaussianMixture& m,
                                      const QuadratureSpec& spec);

// Mixture density evaluated at every node of the tensor grid, flattened with
// the last axis fastest.  Dimension must be 1 or 2.
Eigen::VectorXd density_on_grid(const GaussianMixture& m,
                                const std::vector<AxisGrid>& axes);

// Closed-form h_α for integer α ≥ 2 by expanding ∫f^α over component tuples.
// Throws BudgetExceeded when k^α exceeds term_budget.
EntropyEstimate renyi_exact_integer(const GaussianMixture& m, int alpha,
                                    double term_budget = 1e7);

EntropyEstimate renyi_quadrature(const GaussianMixture& m, double alpha,
                                 const QuadratureSpec& spec = {});

// Shares one density evaluation across several orders (same grid).
std::vector<EntropyEstimate> renyi_quadrature_multi(
    const GaussianMixture& m, const std::vector<double>& orders,
    const QuadratureSpec& spec = {});

EntropyEstimate renyi_monte_carlo(const GaussianMixture& m, double alpha,
                                  std::int64_t samples, std::uint64_t seed);

// h_∞ = −log max f, located by mean-shift ascent from all centers and all
// pairwise midpoints.  The result is an upper bound on the true h_∞.
EntropyEstimate renyi_sup(const GaussianMixture& m);

enum class PolicyKind { Auto, Quadrature, MonteCarlo };

struct EstimatorPolicy {
  PolicyKind kind = PolicyKind::Auto;
  QuadratureSpec grid;
  std::int64_t mc_samples = 200000;
  std::uint64_t seed = 0;
  double exact_term_budget = 1e7;
};

// Dispatches to the cheapest adequate estimator under the policy:
// integer α ≥ 2 → closed form, n ≤ 2 → quadrature, else Monte Carlo;
// α = ∞ → sup branch; α = 0 → +∞ (full-dimensional support).
EntropyEstimate estimate_entropy(const GaussianMixture& m, double alpha,
                                 const EstimatorPolicy& policy);

// N = exp(2·h₁/n) with h₁ computed under the policy.
double entropy_power(const GaussianMixture& m, const EstimatorPolicy& policy);

}  // namespace kplab
