#include "kplab/flow.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "kplab/parallel.hpp"
#include "kplab/rng.hpp"

namespace kplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVelocityStep = 1e-6;
constexpr double kDistanceTolerance = 1e-10;
constexpr double kMergeTolerance = 1e-10;

}  // namespace

Eigen::VectorXd TrajectoryFamily::velocity(int i, double t) const {
  return (position(i, t + kVelocityStep) - position(i, t - kVelocityStep)) /
         (2.0 * kVelocityStep);
}

Eigen::MatrixXd TrajectoryFamily::positions(double t) const {
  Eigen::MatrixXd out(size(), dim());
  for (int i = 0; i < size(); ++i) {
    out.row(i) = position(i, t).transpose();
  }
  return out;
}

Eigen::MatrixXd TrajectoryFamily::velocities(double t) const {
  Eigen::MatrixXd out(size(), dim());
  for (int i = 0; i < size(); ++i) {
    out.row(i) = velocity(i, t).transpose();
  }
  return out;
}

BezdekConnellyLift::BezdekConnellyLift(const ContractionPair& pair)
    : weights_(pair.source().weights()),
      half_dim_(std::max(pair.source().dim(), pair.target().dim())) {
  // Configurations of unequal dimension embed isometrically by zero padding.
  const int n = half_dim_;
  const Eigen::MatrixXd src = pair.source().padded_to(n).points();
  const Eigen::MatrixXd tgt = pair.target().padded_to(n).points();
  mid_ = 0.5 * (src + tgt);
  half_ = 0.5 * (src - tgt);
}

Eigen::VectorXd BezdekConnellyLift::position(int i, double t) const {
  const double angle = std::numbers::pi * t;
  Eigen::VectorXd out(2 * half_dim_);
  out.head(half_dim_) =
      (mid_.row(i) + std::cos(angle) * half_.row(i)).transpose();
  out.tail(half_dim_) = std::sin(angle) * half_.row(i).transpose();
  return out;
}

Eigen::VectorXd BezdekConnellyLift::velocity(int i, double t) const {
  const double angle = std::numbers::pi * t;
  Eigen::VectorXd out(2 * half_dim_);
  out.head(half_dim_) =
      -std::numbers::pi * std::sin(angle) * half_.row(i).transpose();
  out.tail(half_dim_) =
      std::numbers::pi * std::cos(angle) * half_.row(i).transpose();
  return out;
}

BezdekConnellyLift bezdek_connelly_lift(const ContractionPair& pair) {
  return BezdekConnellyLift(pair);
}

CurveFamily::CurveFamily(int dim, Eigen::VectorXd weights, PositionFn position,
                         VelocityFn velocity)
    : dim_(dim),
      weights_(std::move(weights)),
      position_(std::move(position)),
      velocity_(std::move(velocity)) {
  if (dim_ < 1) {
    throw DimensionMismatch("family dimension must be positive");
  }
  if (weights_.size() == 0) {
    throw EmptyConfiguration("a family needs at least one trajectory");
  }
}

Eigen::VectorXd CurveFamily::position(int i, double t) const {
  Eigen::VectorXd x = position_(i, t);
  if (x.size() != dim_) {
    throw DimensionMismatch("trajectory callback returned " +
                            std::to_string(x.size()) +
                            " coordinates, expected " + std::to_string(dim_));
  }
  return x;
}

Eigen::VectorXd CurveFamily::velocity(int i, double t) const {
  if (velocity_) {
    return velocity_(i, t);
  }
  return TrajectoryFamily::velocity(i, t);
}

FlowValidation validate_family(const TrajectoryFamily& family,
                               int grid_points) {
  const int k = family.size();
  FlowValidation result;
  Eigen::MatrixXd previous_distance = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(k, k);
  for (int g = 0; g < grid_points; ++g) {
    const double t = static_cast<double>(g) / (grid_points - 1);
    const Eigen::MatrixXd pos = family.positions(t);
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const double d = (pos.row(i) - pos.row(j)).norm();
        if (g > 0 && d > previous_distance(i, j) + kDistanceTolerance) {
          result.ok = false;
          result.issue = "distance between trajectories " + std::to_string(i) +
                         " and " + std::to_string(j) + " grows at t=" +
                         std::to_string(t);
          return result;
        }
        if (merged(i, j) != 0.0 && d > 10.0 * kMergeTolerance) {
          result.ok = false;
          result.issue = "trajectories " + std::to_string(i) + " and " +
                         std::to_string(j) + " separate after meeting, t=" +
                         std::to_string(t);
          return result;
        }
        if (d <= kMergeTolerance) {
          merged(i, j) = 1.0;
        }
        previous_distance(i, j) = d;
      }
    }
  }
  return result;
}

DiscretePosterior posterior(const TrajectoryFamily& family, double t,
                            const Eigen::VectorXd& x, double s) {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + std::to_string(s));
  }
  if (x.size() != family.dim()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) +
                            " coordinates, expected " +
                            std::to_string(family.dim()));
  }
  const int k = family.size();
  DiscretePosterior post;
  post.x = x;
  post.t = t;
  post.s = s;
  post.positions = family.positions(t);
  post.velocities = family.velocities(t);
  Eigen::VectorXd logits(k);
  const Eigen::VectorXd& w = family.weights();
  for (int i = 0; i < k; ++i) {
    if (w[i] > 0.0) {
      logits[i] = std::log(w[i]) -
                  (x.transpose() - post.positions.row(i)).squaredNorm() /
                      (2.0 * s);
    } else {
      logits[i] = -kInf;
    }
  }
  const double shift = logits.maxCoeff();
  post.p = (logits.array() - shift).exp();
  post.p /= post.p.sum();
  return post;
}

Eigen::VectorXd convolved_velocity(const DiscretePosterior& post) {
  return post.velocities.transpose() * post.p;
}

Eigen::VectorXd convolved_velocity(const TrajectoryFamily& family, double t,
                                   const Eigen::VectorXd& x, double s) {
  return convolved_velocity(posterior(family, t, x, s));
}

double convolved_divergence(const DiscretePosterior& post) {
  const Eigen::VectorXd mean_velocity = post.velocities.transpose() * post.p;
  const Eigen::VectorXd mean_position = post.positions.transpose() * post.p;
  double cov = 0.0;
  for (int i = 0; i < post.p.size(); ++i) {
    cov += post.p[i] *
           (post.velocities.row(i).transpose() - mean_velocity)
               .dot(post.positions.row(i).transpose() - mean_position);
  }
  return cov / post.s;
}

double convolved_divergence(const TrajectoryFamily& family, double t,
                            const Eigen::VectorXd& x, double s) {
  return convolved_divergence(posterior(family, t, x, s));
}

GaussianMixture smoothed_state(const TrajectoryFamily& family, double t,
                               double s) {
  return GaussianMixture::isotropic(family.positions(t), family.weights(), s);
}

ConvexFunctionalSpec ConvexFunctionalSpec::power(double alpha) {
  if (!(alpha > 1.0)) {
    throw Error("the power functional needs an order > 1, got " +
                std::to_string(alpha));
  }
  return ConvexFunctionalSpec{Kind::Power, alpha};
}

ConvexFunctionalSpec ConvexFunctionalSpec::xlogx() {
  return ConvexFunctionalSpec{Kind::XLogX, 0.0};
}

ConvexFunctionalSpec ConvexFunctionalSpec::hockey_stick(double level) {
  if (!(level > 0.0)) {
    throw Error("the hockey-stick functional needs a level > 0, got " +
                std::to_string(level));
  }
  return ConvexFunctionalSpec{Kind::HockeyStick, level};
}

namespace {

// ∫ max(f − c, 0) via the mixture's own grid.
double hockey_stick_quadrature(const GaussianMixture& m, double level,
                               const QuadratureSpec& spec) {
  const std::vector<AxisGrid> axes = quadrature_axes(m, spec);
  const Eigen::VectorXd f = density_on_grid(m, axes);
  if (axes.size() == 1) {
    return sum_terms(static_cast<std::size_t>(axes[0].count),
                     [&](std::size_t i) {
                       const double v = f[static_cast<Eigen::Index>(i)] - level;
                       return v > 0.0
                                  ? axes[0].weight(static_cast<int>(i)) * v
                                  : 0.0;
                     });
  }
  const int g1 = axes[1].count;
  return sum_terms(f.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / g1;
    const int j = static_cast<int>(idx) % g1;
    const double v = f[static_cast<Eigen::Index>(idx)] - level;
    return v > 0.0 ? axes[0].weight(i) * axes[1].weight(j) * v : 0.0;
  });
}

// ∫ max(f − c, 0) = E_f[max(1 − c/f, 0)], estimated on the mixture's own
// samples.
FunctionalValue hockey_stick_monte_carlo(const GaussianMixture& m, double level,
                                         std::int64_t samples,
                                         std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(samples);
  std::vector<double> vals(n);
  for_chunks(n, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double logf = m.log_density(m.sample(seed, j));
      const double ratio = std::exp(std::log(level) - logf);
      vals[j] = ratio < 1.0 ? 1.0 - ratio : 0.0;
    }
  });
  Accumulator mean_acc;
  for (const double v : vals) {
    mean_acc.add(v);
  }
  const double n_d = static_cast<double>(n);
  const double mean = mean_acc.total() / n_d;
  Accumulator var_acc;
  for (const double v : vals) {
    var_acc.add((v - mean) * (v - mean));
  }
  FunctionalValue out;
  out.value = mean;
  out.std_err = std::sqrt(var_acc.total() / (n_d - 1.0) / n_d);
  return out;
}

}  // namespace

std::vector<FunctionalValue> functional_along_flow(
    const TrajectoryFamily& family, const ConvexFunctionalSpec& phi, double s,
    const std::vector<double>& t_grid, const EstimatorPolicy& policy) {
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    if (t_grid[g] < 0.0 || t_grid[g] > 1.0 ||
        (g > 0 && t_grid[g] <= t_grid[g - 1])) {
      throw Error("the t-grid must increase within [0, 1]");
    }
  }
  // One seed for the whole series: every grid point sees the same component
  // picks and noise draws, so the series moves smoothly with t.
  const std::uint64_t series_seed = derive_seed(policy.seed, "flow-series", 0);
  std::vector<FunctionalValue> series;
  series.reserve(t_grid.size());
  for (const double t : t_grid) {
    const GaussianMixture m = smoothed_state(family, t, s);
    FunctionalValue fv;
    fv.t = t;
    switch (phi.kind) {
      case ConvexFunctionalSpec::Kind::Power: {
        const double alpha = phi.param;
        EstimatorPolicy row = policy;
        row.seed = series_seed;
        const EntropyEstimate h = estimate_entropy(m, alpha, row);
        fv.value = std::exp((1.0 - alpha) * h.value);
        fv.std_err = fv.value * std::abs(1.0 - alpha) * h.std_err;
        break;
      }
      case ConvexFunctionalSpec::Kind::XLogX: {
        EstimatorPolicy row = policy;
        row.seed = series_seed;
        const EntropyEstimate h = estimate_entropy(m, 1.0, row);
        fv.value = -h.value;
        fv.std_err = h.std_err;
        break;
      }
      case ConvexFunctionalSpec::Kind::HockeyStick: {
        const bool use_quadrature =
            policy.kind != PolicyKind::MonteCarlo && m.dim() <= 2;
        if (policy.kind == PolicyKind::Quadrature && m.dim() > 2) {
          throw UnsupportedDimension(
              "hockey-stick quadrature supports dimension <= 2, got " +
              std::to_string(m.dim()));
        }
        if (use_quadrature) {
          fv.value = hockey_stick_quadrature(m, phi.param, policy.grid);
          fv.std_err = 0.0;
        } else {
          const FunctionalValue mc = hockey_stick_monte_carlo(
              m, phi.param, policy.mc_samples, series_seed);
          fv.value = mc.value;
          fv.std_err = mc.std_err;
        }
        break;
      }
    }
    series.push_back(fv);
  }
  return series;
}

double velocity_monotonicity_max(const TrajectoryFamily& family,
                                 const std::vector<double>& t_grid) {
  double worst = -kInf;
  for (const double t : t_grid) {
    const Eigen::MatrixXd pos = family.positions(t);
    const Eigen::MatrixXd vel = family.velocities(t);
    for (int i = 0; i < family.size(); ++i) {
      for (int j = i + 1; j < family.size(); ++j) {
        const double inner =
            (vel.row(i) - vel.row(j)).dot(pos.row(i) - pos.row(j));
        worst = std::max(worst, inner);
      }
    }
  }
  return worst;
}

}  // namespace kplab
