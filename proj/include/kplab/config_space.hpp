#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "kplab/errors.hpp"

namespace kplab {

// A weighted finite point set in R^dim.  Immutable once constructed;
// construction validates dimensions and normalizes the weights.
class PointConfiguration {
 public:
  PointConfiguration(int dim, Eigen::MatrixXd points, Eigen::VectorXd weights);

  static PointConfiguration uniform(int dim, Eigen::MatrixXd points);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.rows()); }

  // k x dim, one point per row.
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::VectorXd point(int i) const { return points_.row(i).transpose(); }

  // Same points in a higher dimension, padded with zero coordinates.
  PointConfiguration padded_to(int new_dim) const;
  // Same points with replaced weight vector (validated).
  PointConfiguration with_weights(Eigen::VectorXd weights) const;

 private:
  int dim_;
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

PointConfiguration validate_configuration(int dim,
                                          const std::vector<std::vector<double>>& points,
                                          const std::vector<double>& weights);

// A source configuration and a pairwise-distance-nonincreasing image of it,
// with the certified worst-case distance ratio.
class ContractionPair {
 public:
  const PointConfiguration& source() const { return source_; }
  const PointConfiguration& target() const { return target_; }
  double lipschitz_bound() const { return lipschitz_; }

 private:
  friend ContractionPair make_contraction_pair(PointConfiguration source,
                                               PointConfiguration target);
  ContractionPair(PointConfiguration source, PointConfiguration target,
                  double lipschitz)
      : source_(std::move(source)),
        target_(std::move(target)),
        lipschitz_(lipschitz) {}

  PointConfiguration source_;
  PointConfiguration target_;
  double lipschitz_;
};

// Certifies the pairwise condition ||target_i - target_j|| <= ||source_i -
// source_j|| (absolute tolerance 1e-12 on squared distances) and computes
// the Lipschitz bound.  Throws NotAContraction or InconsistentCollapse.
ContractionPair make_contraction_pair(PointConfiguration source,
                                      PointConfiguration target);

enum class ContractionMethod { Scaling, Projection, Composition, Folding };

// Seeded generator of valid contraction pairs built from 1-Lipschitz
// primitives.  Deterministic for a fixed seed.
ContractionPair random_contraction(const PointConfiguration& source,
                                   ContractionMethod method,
                                   std::uint64_t seed);

// 1-Lipschitz primitive maps, exposed for direct testing.
Eigen::VectorXd project_to_ball(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& center, double radius);
Eigen::VectorXd project_to_halfspace(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& unit_normal,
                                     double offset);
Eigen::VectorXd fold_across_hyperplane(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& unit_normal,
                                       double offset);

}  // namespace kplab
