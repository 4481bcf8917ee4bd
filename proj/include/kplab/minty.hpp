#pragma once

#include <Eigen/Dense>

#include "kplab/errors.hpp"
#include "kplab/flow.hpp"

namespace kplab {

// A finite monotone relation: ⟨x_i − x_j, y_i − y_j⟩ ≥ 0 for all pairs
// (validated with tolerance 1e-10 at construction).
class MonotonePairs {
 public:
  MonotonePairs(Eigen::MatrixXd xs, Eigen::MatrixXd ys);

  int dim() const { return static_cast<int>(xs_.cols()); }
  int size() const { return static_cast<int>(xs_.rows()); }
  const Eigen::MatrixXd& xs() const { return xs_; }
  const Eigen::MatrixXd& ys() const { return ys_; }

 private:
  Eigen::MatrixXd xs_;
  Eigen::MatrixXd ys_;
};

// Extends the relation to x0: returns y0 with ⟨x0 − x_i, y0 − y_i⟩ ≥ −1e-9
// for all i.  Requires x0 in the relative interior of conv{x_i} (barycentric
// coordinates ≥ 1e-9); when x0 coincides with some x_i, returns y_i.
// Solved by over-relaxed projection onto violated half-spaces with an exact
// simplex fallback.
Eigen::VectorXd extend_monotone(const MonotonePairs& pairs,
                                const Eigen::VectorXd& x0);

// Velocity value at the posterior mean E Y = Σ p_i c_i that preserves the
// monotone-decreasing property of the velocity field.  Also asserts the
// substitution identity: Σ p_i ⟨v_i − w, c_i − EY⟩ has the same value for
// every w, because Σ p_i (c_i − EY) = 0.
Eigen::VectorXd extend_velocity_at_mean(const DiscretePosterior& post);

namespace detail {

// Phase-1 simplex feasibility for A z = b, z ≥ 0 (Bland's rule).  Returns
// false when the system is infeasible.  Exposed for direct testing.
bool phase1_feasible(Eigen::MatrixXd A, Eigen::VectorXd b,
                     Eigen::VectorXd* solution);

}  // namespace detail

}  // namespace kplab
