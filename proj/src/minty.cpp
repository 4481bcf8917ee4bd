#include "kplab/minty.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace kplab {

namespace {

constexpr double kMonotoneTolerance = 1e-10;
constexpr double kBarycentricFloor = 1e-9;
constexpr double kRelaxation = 1.5;
constexpr int kRelaxationCap = 100000;

}  // namespace

MonotonePairs::MonotonePairs(Eigen::MatrixXd xs, Eigen::MatrixXd ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.rows() == 0) {
    throw EmptyConfiguration("a monotone relation needs at least one pair");
  }
  if (xs_.rows() != ys_.rows() || xs_.cols() != ys_.cols()) {
    throw DimensionMismatch("xs and ys must have matching shapes");
  }
  for (Eigen::Index i = 0; i < xs_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < xs_.rows(); ++j) {
      const double inner =
          (xs_.row(i) - xs_.row(j)).dot(ys_.row(i) - ys_.row(j));
      if (inner < -kMonotoneTolerance) {
        throw Error("pairs " + std::to_string(i) + " and " + std::to_string(j) +
                    " break monotonicity: inner product " +
                    std::to_string(inner));
      }
    }
  }
}

namespace detail {

bool phase1_feasible(Eigen::MatrixXd A, Eigen::VectorXd b,
                     Eigen::VectorXd* solution) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  for (Eigen::Index r = 0; r < m; ++r) {
    if (b[r] < 0.0) {
      A.row(r) *= -1.0;
      b[r] *= -1.0;
    }
  }
  // Tableau over the original columns plus one artificial per row; the
  // artificials start as the basis and their sum is driven to zero.
  Eigen::MatrixXd T(m, n + m);
  T.leftCols(n) = A;
  T.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = b;
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    basis[r] = n + r;
  }
  // Reduced costs for minimizing the artificial sum.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.tail(m).setOnes();
  Eigen::VectorXd reduced = cost;
  double objective = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    reduced -= T.row(r);
    objective -= rhs[r];
  }
  for (int iter = 0; iter < 20000; ++iter) {
    // Bland's rule: the lowest-index improving column enters.
    Eigen::Index entering = -1;
    for (Eigen::Index c = 0; c < n + m; ++c) {
      if (reduced[c] < -1e-12) {
        entering = c;
        break;
      }
    }
    if (entering < 0) {
      break;
    }
    Eigen::Index leaving = -1;
    double best_ratio = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (T(r, entering) > 1e-12) {
        const double ratio = rhs[r] / T(r, entering);
        if (leaving < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis[r] < basis[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
    }
    if (leaving < 0) {
      // Unbounded phase-1 cannot happen (objective bounded below by 0);
      // treat as numerical breakdown.
      return false;
    }
    const double pivot = T(leaving, entering);
    T.row(leaving) /= pivot;
    rhs[leaving] /= pivot;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (r != leaving && T(r, entering) != 0.0) {
        const double factor = T(r, entering);
        T.row(r) -= factor * T.row(leaving);
        rhs[r] -= factor * rhs[leaving];
      }
    }
    const double rfactor = reduced[entering];
    reduced -= rfactor * T.row(leaving).transpose();
    objective -= rfactor * rhs[leaving];
    basis[leaving] = entering;
  }
  if (objective < -1e-8) {
    return false;
  }
  if (solution != nullptr) {
    solution->setZero(n);
    for (Eigen::Index r = 0; r < m; ++r) {
      if (basis[r] < n) {
        (*solution)[basis[r]] = rhs[r];
      }
    }
  }
  return true;
}

}  // namespace detail

namespace {

// x0 lies in the relative interior of conv{x_i} iff it admits barycentric
// coordinates all ≥ the floor: Σλ_i = 1, Σλ_i x_i = x0, λ_i ≥ 1e-9.
bool in_relative_interior(const Eigen::MatrixXd& xs,
                          const Eigen::VectorXd& x0) {
  const Eigen::Index k = xs.rows();
  const Eigen::Index n = xs.cols();
  // Substitute λ = μ + floor, μ ≥ 0.
  Eigen::MatrixXd A(n + 1, k);
  A.topRows(n) = xs.transpose();
  A.bottomRows(1).setOnes();
  Eigen::VectorXd b(n + 1);
  b.head(n) = x0 - kBarycentricFloor * xs.colwise().sum().transpose();
  b[n] = 1.0 - kBarycentricFloor * static_cast<double>(k);
  if (b[n] < 0.0) {
    return false;  // more points than the floor allows; cannot happen at k ≤ 1e9
  }
  return detail::phase1_feasible(std::move(A), std::move(b), nullptr);
}

// Exact fallback: a_i·y ≥ b_i as a phase-1 problem over (y⁺, y⁻, surplus).
bool solve_halfspaces_simplex(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, Eigen::VectorXd* y) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Eigen::MatrixXd A(m, 2 * n + m);
  A.leftCols(n) = a;
  A.middleCols(n, n) = -a;
  A.rightCols(m) = -Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd z;
  if (!detail::phase1_feasible(A, b, &z)) {
    return false;
  }
  *y = z.head(n) - z.segment(n, n);
  return true;
}

}  // namespace

Eigen::VectorXd extend_monotone(const MonotonePairs& pairs,
                                const Eigen::VectorXd& x0) {
  const int k = pairs.size();
  const int n = pairs.dim();
  if (x0.size() != n) {
    throw DimensionMismatch("x0 has " + std::to_string(x0.size()) +
                            " coordinates, expected " + std::to_string(n));
  }
  for (int i = 0; i < k; ++i) {
    if ((x0.transpose() - pairs.xs().row(i)).norm() <= 1e-12) {
      return pairs.ys().row(i).transpose();
    }
  }
  if (!in_relative_interior(pairs.xs(), x0)) {
    throw NotInRelativeInterior(
        "x0 is not in the relative interior of the hull of the x_i");
  }
  // Half-space system ⟨x0 − x_i, y⟩ ≥ ⟨x0 − x_i, y_i⟩.
  Eigen::MatrixXd a(k, n);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    a.row(i) = x0.transpose() - pairs.xs().row(i);
    b[i] = a.row(i).dot(pairs.ys().row(i));
  }
  // Over-relaxed projection onto the most violated half-space.
  Eigen::VectorXd y = pairs.ys().colwise().mean().transpose();
  for (int iter = 0; iter < kRelaxationCap; ++iter) {
    int worst = -1;
    double worst_violation = 1e-12;
    for (int i = 0; i < k; ++i) {
      const double violation = b[i] - a.row(i).dot(y);
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = i;
      }
    }
    if (worst < 0) {
      return y;
    }
    y += kRelaxation * worst_violation / a.row(worst).squaredNorm() *
         a.row(worst).transpose();
  }
  Eigen::VectorXd fallback;
  if (!solve_halfspaces_simplex(a, b, &fallback)) {
    // Minty's theorem guarantees a solution under the precondition, so this
    // indicates an internal defect rather than bad input.
    throw InfeasibleSystem(
        "half-space system for the monotone extension appears infeasible");
  }
  return fallback;
}

Eigen::VectorXd extend_velocity_at_mean(const DiscretePosterior& post) {
  const Eigen::Index k = post.p.size();
  const Eigen::VectorXd mean_position = post.positions.transpose() * post.p;
  if (k == 1) {
    return post.velocities.row(0).transpose();
  }
  Eigen::VectorXd w;
  try {
    // Monotone-decreasing velocities become a monotone relation after a
    // sign flip on the y side.
    const MonotonePairs pairs(post.positions, -post.velocities);
    w = -extend_monotone(pairs, mean_position);
  } catch (const NotInRelativeInterior&) {
    // The posterior concentrated so hard that E Y sits numerically on the
    // hull boundary, next to the dominant center.  Its velocity is feasible
    // up to the same rounding margin, and the substitution identity below
    // holds for any choice.
    Eigen::Index nearest = 0;
    (post.positions.rowwise() - mean_position.transpose())
        .rowwise()
        .squaredNorm()
        .minCoeff(&nearest);
    w = post.velocities.row(nearest).transpose();
  }
  // Substitution identity: Σ p_i ⟨v_i − w, c_i − EY⟩ must agree with the
  // centered covariance because Σ p_i (c_i − EY) = 0.
  const Eigen::VectorXd mean_velocity = post.velocities.transpose() * post.p;
  double with_w = 0.0;
  double centered = 0.0;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::VectorXd dc =
        post.positions.row(i).transpose() - mean_position;
    with_w += post.p[i] * (post.velocities.row(i).transpose() - w).dot(dc);
    centered += post.p[i] *
                (post.velocities.row(i).transpose() - mean_velocity).dot(dc);
    scale = std::max(scale, post.p[i] * dc.norm() *
                                (1.0 + post.velocities.row(i).norm() +
                                 w.norm()));
  }
  if (std::abs(with_w - centered) > 1e-12 * scale) {
    throw Error("substitution identity failed: " + std::to_string(with_w) +
                " vs " + std::to_string(centered));
  }
  return w;
}

}  // namespace kplab
