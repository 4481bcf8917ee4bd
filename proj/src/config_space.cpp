#include "kplab/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kplab/rng.hpp"

namespace kplab {

namespace {

constexpr double kWeightSumTolerance = 1e-9;
// Absolute tolerance on squared pairwise distances for the contraction check.
constexpr double kPairTolerance = 1e-12;

void check_weights(const Eigen::VectorXd& weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw NonPositiveWeightSum("weight " + std::to_string(i) +
                                 " is negative or not finite");
    }
  }
  const double sum = weights.sum();
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw NonPositiveWeightSum("weights sum to " + std::to_string(sum) +
                               ", expected 1 within 1e-9");
  }
}

}  // namespace

PointConfiguration::PointConfiguration(int dim, Eigen::MatrixXd points,
                                       Eigen::VectorXd weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
  if (dim_ < 1) {
    throw DimensionMismatch("dimension must be a positive integer, got " +
                            std::to_string(dim_));
  }
  if (points_.rows() == 0) {
    throw EmptyConfiguration("a configuration needs at least one point");
  }
  if (points_.cols() != dim_) {
    throw DimensionMismatch("points have " + std::to_string(points_.cols()) +
                            " coordinates, expected " + std::to_string(dim_));
  }
  if (weights_.size() != points_.rows()) {
    throw DimensionMismatch("got " + std::to_string(weights_.size()) +
                            " weights for " + std::to_string(points_.rows()) +
                            " points");
  }
  check_weights(weights_);
  weights_ /= weights_.sum();
}

PointConfiguration PointConfiguration::uniform(int dim, Eigen::MatrixXd points) {
  const Eigen::Index k = points.rows();
  return PointConfiguration(
      dim, std::move(points),
      Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
}

PointConfiguration PointConfiguration::padded_to(int new_dim) const {
  if (new_dim < dim_) {
    throw DimensionMismatch("cannot pad dimension " + std::to_string(dim_) +
                            " down to " + std::to_string(new_dim));
  }
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(points_.rows(), new_dim);
  padded.leftCols(dim_) = points_;
  return PointConfiguration(new_dim, std::move(padded), weights_);
}

PointConfiguration PointConfiguration::with_weights(Eigen::VectorXd weights) const {
  return PointConfiguration(dim_, points_, std::move(weights));
}

PointConfiguration validate_configuration(
    int dim, const std::vector<std::vector<double>>& points,
    const std::vector<double>& weights) {
  if (points.empty()) {
    throw EmptyConfiguration("a configuration needs at least one point");
  }
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(points.size()), dim);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != dim) {
      throw DimensionMismatch("point " + std::to_string(i) + " has " +
                              std::to_string(points[i].size()) +
                              " coordinates, expected " + std::to_string(dim));
    }
    for (int j = 0; j < dim; ++j) {
      mat(static_cast<Eigen::Index>(i), j) = points[i][j];
    }
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  return PointConfiguration(dim, std::move(mat), std::move(w));
}

ContractionPair make_contraction_pair(PointConfiguration source,
                                      PointConfiguration target) {
  const int k = source.size();
  if (target.size() != k) {
    throw DimensionMismatch("source has " + std::to_string(k) +
                            " points, target has " +
                            std::to_string(target.size()));
  }
  if ((source.weights() - target.weights()).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw Error("source and target must carry identical weights");
  }
  double lipschitz = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double ds2 =
          (source.points().row(i) - source.points().row(j)).squaredNorm();
      const double dt2 =
          (target.points().row(i) - target.points().row(j)).squaredNorm();
      if (ds2 <= kPairTolerance) {
        // Coincident source points may only map to coincident targets.
        if (dt2 > kPairTolerance) {
          throw InconsistentCollapse(
              "points " + std::to_string(i) + " and " + std::to_string(j) +
                  " coincide in the source but not in the target",
              i, j);
        }
        continue;
      }
      if (dt2 > ds2 + kPairTolerance) {
        const double ratio = std::sqrt(dt2 / ds2);
        throw NotAContraction("pair (" + std::to_string(i) + ", " +
                                  std::to_string(j) +
                                  ") expands by factor " +
                                  std::to_string(ratio),
                              i, j, ratio);
      }
      lipschitz = std::max(lipschitz, std::sqrt(dt2 / ds2));
    }
  }
  lipschitz = std::min(lipschitz, 1.0);
  return ContractionPair(std::move(source), std::move(target), lipschitz);
}

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& center, double radius) {
  const Eigen::VectorXd d = x - center;
  const double norm = d.norm();
  if (norm <= radius) {
    return x;
  }
  return center + (radius / norm) * d;
}

Eigen::VectorXd project_to_halfspace(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& unit_normal,
                                     double offset) {
  const double excess = unit_normal.dot(x) - offset;
  if (excess <= 0.0) {
    return x;
  }
  return x - excess * unit_normal;
}

Eigen::VectorXd fold_across_hyperplane(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& unit_normal,
                                       double offset) {
  const double excess = unit_normal.dot(x) - offset;
  if (excess <= 0.0) {
    return x;
  }
  return x - 2.0 * excess * unit_normal;
}

namespace {

// Sequential scalar draws on top of the counter-based generator.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform(counter_++); }

  Eigen::VectorXd unit_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (;;) {
      for (int i = 0; i < dim; ++i) {
        v[i] = rng_.normal(counter_, static_cast<std::uint64_t>(i));
      }
      ++counter_;
      const double norm = v.norm();
      if (norm > 1e-8) {
        return v / norm;
      }
    }
  }

  std::uint64_t pick(std::uint64_t n) { return rng_.index(counter_++, n); }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& pts, Draws& draws) {
  const double beta = draws.uniform();
  const Eigen::RowVectorXd centroid = pts.colwise().mean();
  return ((pts.rowwise() - centroid) * beta).rowwise() + centroid;
}

Eigen::MatrixXd apply_projection(const Eigen::MatrixXd& pts, Draws& draws) {
  const int dim = static_cast<int>(pts.cols());
  const Eigen::RowVectorXd centroid = pts.colwise().mean();
  const double spread =
      std::max(1.0, (pts.rowwise() - centroid).rowwise().norm().maxCoeff());
  Eigen::MatrixXd out = pts;
  if (draws.pick(2) == 0) {
    // Metric projection onto a closed ball near the configuration.
    Eigen::VectorXd center = centroid.transpose();
    center += spread * (draws.uniform() - 0.5) * draws.unit_vector(dim);
    const double radius = spread * (0.25 + 1.25 * draws.uniform());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      out.row(i) =
          project_to_ball(pts.row(i).transpose(), center, radius).transpose();
    }
  } else {
    // Metric projection onto a half-space cutting through the configuration.
    const Eigen::VectorXd normal = draws.unit_vector(dim);
    const double offset =
        normal.dot(centroid.transpose()) + spread * (draws.uniform() - 0.5);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      out.row(i) =
          project_to_halfspace(pts.row(i).transpose(), normal, offset)
              .transpose();
    }
  }
  return out;
}

Eigen::MatrixXd apply_folding(const Eigen::MatrixXd& pts, Draws& draws) {
  const int dim = static_cast<int>(pts.cols());
  const Eigen::RowVectorXd centroid = pts.colwise().mean();
  const double spread =
      std::max(1.0, (pts.rowwise() - centroid).rowwise().norm().maxCoeff());
  const Eigen::VectorXd normal = draws.unit_vector(dim);
  const double offset =
      normal.dot(centroid.transpose()) + spread * (draws.uniform() - 0.5);
  Eigen::MatrixXd out = pts;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    out.row(i) =
        fold_across_hyperplane(pts.row(i).transpose(), normal, offset)
            .transpose();
  }
  return out;
}

}  // namespace

ContractionPair random_contraction(const PointConfiguration& source,
                                   ContractionMethod method,
                                   std::uint64_t seed) {
  Draws draws(seed);
  Eigen::MatrixXd pts = source.points();
  switch (method) {
    case ContractionMethod::Scaling:
      pts = apply_scaling(pts, draws);
      break;
    case ContractionMethod::Projection:
      pts = apply_projection(pts, draws);
      break;
    case ContractionMethod::Folding:
      pts = apply_folding(pts, draws);
      break;
    case ContractionMethod::Composition: {
      const std::uint64_t steps = 1 + draws.pick(3);
      for (std::uint64_t s = 0; s < steps; ++s) {
        switch (draws.pick(3)) {
          case 0:
            pts = apply_scaling(pts, draws);
            break;
          case 1:
            pts = apply_projection(pts, draws);
            break;
          default:
            pts = apply_folding(pts, draws);
            break;
        }
      }
      break;
    }
  }
  PointConfiguration target(source.dim(), std::move(pts), source.weights());
  return make_contraction_pair(source, std::move(target));
}

}  // namespace kplab
