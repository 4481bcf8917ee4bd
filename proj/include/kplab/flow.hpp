#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/gauss_mixture.hpp"

namespace kplab {

// A family t ∈ [0,1] ↦ positions of k weighted labeled points, with
// per-point velocities (analytic where available).
class TrajectoryFamily {
 public:
  virtual ~TrajectoryFamily() = default;

  virtual int dim() const = 0;
  virtual int size() const = 0;
  virtual const Eigen::VectorXd& weights() const = 0;
  virtual Eigen::VectorXd position(int i, double t) const = 0;
  // Default: central finite difference with step 1e-6.
  virtual Eigen::VectorXd velocity(int i, double t) const;

  Eigen::MatrixXd positions(double t) const;   // k × dim
  Eigen::MatrixXd velocities(double t) const;  // k × dim
};

// The trigonometric trajectories carrying (x, 0) to (T(x), 0) in twice the
// ambient dimension while every pairwise distance decreases monotonically:
//   S_t(x) = (m + cos(πt)·u, sin(πt)·u),  m = (x+Tx)/2,  u = (x−Tx)/2.
class BezdekConnellyLift : public TrajectoryFamily {
 public:
  explicit BezdekConnellyLift(const ContractionPair& pair);

  int dim() const override { return 2 * half_dim_; }
  int size() const override { return static_cast<int>(mid_.rows()); }
  const Eigen::VectorXd& weights() const override { return weights_; }
  Eigen::VectorXd position(int i, double t) const override;
  Eigen::VectorXd velocity(int i, double t) const override;  // analytic

 private:
  Eigen::MatrixXd mid_;   // (x_i + T(x_i))/2, one row per point
  Eigen::MatrixXd half_;  // (x_i − T(x_i))/2
  Eigen::VectorXd weights_;
  int half_dim_;
};

BezdekConnellyLift bezdek_connelly_lift(const ContractionPair& pair);

// Family defined by a user-supplied position callback (velocity optional;
// finite differences otherwise).  The callback must accept arguments
// slightly outside [0,1] for the differentiation stencil.
class CurveFamily : public TrajectoryFamily {
 public:
  using PositionFn = std::function<Eigen::VectorXd(int, double)>;
  using VelocityFn = std::function<Eigen::VectorXd(int, double)>;

  CurveFamily(int dim, Eigen::VectorXd weights, PositionFn position,
              VelocityFn velocity = nullptr);

  int dim() const override { return dim_; }
  int size() const override { return static_cast<int>(weights_.size()); }
  const Eigen::VectorXd& weights() const override { return weights_; }
  Eigen::VectorXd position(int i, double t) const override;
  Eigen::VectorXd velocity(int i, double t) const override;

 private:
  int dim_;
  Eigen::VectorXd weights_;
  PositionFn position_;
  VelocityFn velocity_;
};

struct FlowValidation {
  bool ok = true;
  std::string issue;  // first violation found, empty when ok
};

// Checks on an equispaced t-grid that pairwise distances never increase
// (tolerance 1e-10) and that trajectories which meet stay together.
FlowValidation validate_family(const TrajectoryFamily& family,
                               int grid_points = 101);

// Posterior over components given a noisy observation of the flow state:
// p_i ∝ w_i · exp(−‖x − c_i(t)‖²/(2s)).
struct DiscretePosterior {
  Eigen::VectorXd x;
  double t = 0.0;
  double s = 1.0;
  Eigen::VectorXd p;
  Eigen::MatrixXd positions;   // c_i(t), one row per component
  Eigen::MatrixXd velocities;  // v_i(t)
};

DiscretePosterior posterior(const TrajectoryFamily& family, double t,
                            const Eigen::VectorXd& x, double s);

// Velocity of the noise-smoothed flow: the posterior expectation Σ p_i v_i.
Eigen::VectorXd convolved_velocity(const DiscretePosterior& post);
Eigen::VectorXd convolved_velocity(const TrajectoryFamily& family, double t,
                                   const Eigen::VectorXd& x, double s);

// Divergence of the smoothed velocity field, exact from the posterior
// covariance: (1/s)·Σ p_i ⟨v_i − v̄, c_i − c̄⟩.
double convolved_divergence(const DiscretePosterior& post);
double convolved_divergence(const TrajectoryFamily& family, double t,
                            const Eigen::VectorXd& x, double s);

// Density of the flow state at time t smoothed by variance-s noise.
GaussianMixture smoothed_state(const TrajectoryFamily& family, double t,
                               double s);

// Convex integrands φ with φ(0) = 0 whose integrals are monotone along the
// smoothed flow.
struct ConvexFunctionalSpec {
  enum class Kind { Power, XLogX, HockeyStick };
  Kind kind = Kind::Power;
  double param = 2.0;  // the order α for Power, the level c for HockeyStick

  static ConvexFunctionalSpec power(double alpha);
  static ConvexFunctionalSpec xlogx();
  static ConvexFunctionalSpec hockey_stick(double level);
};

struct FunctionalValue {
  double t = 0.0;
  double value = 0.0;
  double std_err = 0.0;
};

// The series t ↦ ∫ φ(f_t) dx over the grid.  One estimator method and one
// sample stream serve the whole series, so stochastic noise is common to
// all grid points rather than independent per point.
std::vector<FunctionalValue> functional_along_flow(
    const TrajectoryFamily& family, const ConvexFunctionalSpec& phi, double s,
    const std::vector<double>& t_grid, const EstimatorPolicy& policy);

// Largest pairwise ⟨v_i − v_j, c_i − c_j⟩ over the grid (≤ 0 for genuinely
// contracting families, up to tolerance).
double velocity_monotonicity_max(const TrajectoryFamily& family,
                                 const std::vector<double>& t_grid);

}  // namespace kplab
