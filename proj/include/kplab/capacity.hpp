#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/gauss_mixture.hpp"
#include "kplab/kp_verify.hpp"

namespace kplab {

struct CapacityIteration {
  int iteration = 0;
  double mutual_information = 0.0;  // I(w) at this iterate, nats
  double bracket_width = 0.0;       // max_i D_i − I(w)
};

struct CapacityResult {
  Eigen::VectorXd weights;  // final input law
  double capacity = 0.0;    // I(w) at termination
  double lower = 0.0;       // = capacity
  double upper = 0.0;       // max_i D_i at termination
  std::vector<CapacityIteration> history;
  double noise = 1.0;
  bool converged = false;
};

// Capacity of the channel x_i ↦ x_i + √s·Z over a finite alphabet by
// alternating maximization: w ← w·exp(D)/normalizer with
// D_i = KL(N(x_i, s·I) ‖ Σ w_j N(x_j, s·I)).  The divergences are computed
// on one fixed output grid (dimension ≤ 2) or, beyond that, on one frozen
// set of noise draws shared by every component and iteration, so runs are
// deterministic.  Hitting max_iter is reported via converged = false, not
// an error.
CapacityResult blahut_arimoto(const PointConfiguration& alphabet, double s,
                              double tol = 1e-4, int max_iter = 500,
                              const QuadratureSpec& grid = {},
                              std::int64_t mc_samples = 20000,
                              std::uint64_t seed = 0);

// Mutual information of the same channel at a fixed input law.
double channel_mutual_information(const PointConfiguration& alphabet,
                                  const Eigen::VectorXd& input_weights,
                                  double s, const EstimatorPolicy& policy);

struct CapacityComparison {
  CapacityResult source;
  CapacityResult target;
  double gap = 0.0;  // C_source − C_target
  // The mechanism behind the comparison: at the target-optimal input law,
  // the source channel already carries at least as much information.
  double i_source_at_target_weights = 0.0;
  double i_target_at_target_weights = 0.0;
  bool pointwise_ok = false;
  Verdict verdict = Verdict::Holds;
};

// Contracting an alphabet cannot raise its capacity.  The verdict flags a
// violation only when the gap clears both final brackets plus 1e-6.
CapacityComparison capacity_contraction_check(const ContractionPair& pair,
                                              double s, double tol = 1e-4,
                                              const QuadratureSpec& grid = {},
                                              std::int64_t mc_samples = 20000,
                                              std::uint64_t seed = 0);

}  // namespace kplab
