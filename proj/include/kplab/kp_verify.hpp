#pragma once

#include <string>
#include <vector>

#include "kplab/config_space.hpp"
#include "kplab/gauss_mixture.hpp"

namespace kplab {

enum class Verdict { Holds, HoldsWithinNoise, Violation, Skipped };

std::string verdict_name(Verdict verdict);

// Shared decision rule: an inequality "gap >= 0" is flagged as violated only
// below both the absolute tolerance and three combined standard errors.
Verdict gap_verdict(double gap, double combined_std_err, double abs_tol = 1e-6);

struct KpRow {
  double order = 1.0;
  double noise = 1.0;
  EntropyEstimate source;
  EntropyEstimate target;
  double gap = 0.0;  // h_source − h_target
  double combined_std_err = 0.0;
  Verdict verdict = Verdict::Holds;
  std::string note;  // populated when a row is skipped
};

struct KpReport {
  std::string pair_id;
  double lipschitz_bound = 1.0;
  std::vector<KpRow> rows;

  bool any_violation() const;
};

// Compares h_α(source + √s·noise) against h_α(target + √s·noise) for every
// (α, s).  Both sides of a row always use the same estimator method, and
// stochastic rows share one sample stream (common random numbers), so the
// comparison noise cancels rather than accumulates.  Configurations of
// different dimensions are zero-padded to a common ambient dimension first,
// which shifts both entropies by the same additive constant.
KpReport verify_kp_entropy(const ContractionPair& pair,
                           const std::vector<double>& orders,
                           const std::vector<double>& noises,
                           const EstimatorPolicy& policy,
                           std::string pair_id = {}, double abs_tol = 1e-6);

// I(X; X + √s·Z) = h₁(mixture) − (n/2)·log(2πes), in nats.
EntropyEstimate mutual_information(const PointConfiguration& config, double s,
                                   const EstimatorPolicy& policy);

struct MiComparison {
  EntropyEstimate i_source;
  EntropyEstimate i_target;
  double gap = 0.0;
  double combined_std_err = 0.0;
  Verdict verdict = Verdict::Holds;
};

MiComparison verify_mi_contraction(const ContractionPair& pair, double s,
                                   const EstimatorPolicy& policy);

}  // namespace kplab
