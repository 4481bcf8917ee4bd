#include "kplab/kp_verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "kplab/rng.hpp"

namespace kplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Both sides of one comparison row, computed with one method and, for Monte
// Carlo, one shared sample stream.
std::pair<EntropyEstimate, EntropyEstimate> matched_estimates(
    const GaussianMixture& source, const GaussianMixture& target, double alpha,
    const EstimatorPolicy& policy, std::uint64_t row_seed) {
  if (std::isinf(alpha)) {
    return {renyi_sup(source), renyi_sup(target)};
  }
  const bool integer_order =
      alpha >= 2.0 && alpha <= 64.0 && alpha == std::floor(alpha);
  const double exact_terms =
      integer_order ? std::pow(static_cast<double>(source.components()), alpha)
                    : kInf;
  PolicyKind kind = policy.kind;
  if (kind == PolicyKind::Auto) {
    if (integer_order && exact_terms <= policy.exact_term_budget) {
      return {renyi_exact_integer(source, static_cast<int>(alpha),
                                  policy.exact_term_budget),
              renyi_exact_integer(target, static_cast<int>(alpha),
                                  policy.exact_term_budget)};
    }
    kind = source.dim() <= 2 ? PolicyKind::Quadrature : PolicyKind::MonteCarlo;
  }
  if (kind == PolicyKind::Quadrature) {
    return {renyi_quadrature(source, alpha, policy.grid),
            renyi_quadrature(target, alpha, policy.grid)};
  }
  return {renyi_monte_carlo(source, alpha, policy.mc_samples, row_seed),
          renyi_monte_carlo(target, alpha, policy.mc_samples, row_seed)};
}

double combined_err(const EntropyEstimate& a, const EntropyEstimate& b) {
  return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

}  // namespace

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Holds:
      return "holds";
    case Verdict::HoldsWithinNoise:
      return "holds-within-noise";
    case Verdict::Violation:
      return "VIOLATION";
    case Verdict::Skipped:
      return "skipped";
  }
  return "unknown";
}

Verdict gap_verdict(double gap, double combined_std_err, double abs_tol) {
  if (gap >= 0.0) {
    return Verdict::Holds;
  }
  if (gap < -std::max(abs_tol, 3.0 * combined_std_err)) {
    return Verdict::Violation;
  }
  return Verdict::HoldsWithinNoise;
}

bool KpReport::any_violation() const {
  for (const KpRow& row : rows) {
    if (row.verdict == Verdict::Violation) {
      return true;
    }
  }
  return false;
}

KpReport verify_kp_entropy(const ContractionPair& pair,
                           const std::vector<double>& orders,
                           const std::vector<double>& noises,
                           const EstimatorPolicy& policy,
                           std::string pair_id, double abs_tol) {
  for (const double alpha : orders) {
    if (!(alpha > 0.0)) {
      throw NonPositiveAlpha("comparison orders must lie in (0, ∞], got " +
                             std::to_string(alpha));
    }
  }
  for (const double s : noises) {
    if (!(s > 0.0)) {
      throw Error("noise variances must be positive, got " +
                  std::to_string(s));
    }
  }
  const int common_dim = std::max(pair.source().dim(), pair.target().dim());
  const PointConfiguration source = pair.source().padded_to(common_dim);
  const PointConfiguration target = pair.target().padded_to(common_dim);
  KpReport report;
  report.pair_id = std::move(pair_id);
  report.lipschitz_bound = pair.lipschitz_bound();
  std::uint64_t row_index = 0;
  for (const double alpha : orders) {
    for (const double s : noises) {
      const std::uint64_t row_seed = derive_seed(policy.seed, "kp-row", row_index);
      ++row_index;
      KpRow row;
      row.order = alpha;
      row.noise = s;
      try {
        const GaussianMixture src = GaussianMixture::isotropic(source, s);
        const GaussianMixture tgt = GaussianMixture::isotropic(target, s);
        auto [hs, ht] = matched_estimates(src, tgt, alpha, policy, row_seed);
        row.source = hs;
        row.target = ht;
        row.gap = hs.value - ht.value;
        row.combined_std_err = combined_err(hs, ht);
        row.verdict = gap_verdict(row.gap, row.combined_std_err, abs_tol);
      } catch (const Error& e) {
        row.verdict = Verdict::Skipped;
        row.note = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

EntropyEstimate mutual_information(const PointConfiguration& config, double s,
                                   const EstimatorPolicy& policy) {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + std::to_string(s));
  }
  const double n = static_cast<double>(config.dim());
  const double h_noise = 0.5 * n * std::log(2.0 * std::numbers::pi *
                                            std::numbers::e * s);
  if (config.size() == 1) {
    EntropyEstimate est;
    est.order = 1.0;
    est.value = 0.0;
    est.std_err = 0.0;
    est.method = EntropyMethod::ExactInteger;
    est.metadata = "single-letter alphabet";
    return est;
  }
  const GaussianMixture m = GaussianMixture::isotropic(config, s);
  EntropyEstimate est = estimate_entropy(m, 1.0, policy);
  est.value -= h_noise;
  est.metadata += " h_noise=" + std::to_string(h_noise);
  return est;
}

MiComparison verify_mi_contraction(const ContractionPair& pair, double s,
                                   const EstimatorPolicy& policy) {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + std::to_string(s));
  }
  // Zero-padding to a common dimension leaves each I(X; X+√sZ) unchanged:
  // the mixture entropy and h(√sZ) shift by the same amount.
  const int common_dim = std::max(pair.source().dim(), pair.target().dim());
  const PointConfiguration source = pair.source().padded_to(common_dim);
  const PointConfiguration target = pair.target().padded_to(common_dim);
  const double n = static_cast<double>(common_dim);
  const double h_noise = 0.5 * n * std::log(2.0 * std::numbers::pi *
                                            std::numbers::e * s);
  const GaussianMixture src = GaussianMixture::isotropic(source, s);
  const GaussianMixture tgt = GaussianMixture::isotropic(target, s);
  const std::uint64_t row_seed = derive_seed(policy.seed, "mi-row", 0);
  auto [hs, ht] = matched_estimates(src, tgt, 1.0, policy, row_seed);
  MiComparison cmp;
  cmp.i_source = hs;
  cmp.i_source.value -= h_noise;
  cmp.i_target = ht;
  cmp.i_target.value -= h_noise;
  cmp.gap = cmp.i_source.value - cmp.i_target.value;
  cmp.combined_std_err = combined_err(hs, ht);
  cmp.verdict = gap_verdict(cmp.gap, cmp.combined_std_err);
  return cmp;
}

}  // namespace kplab
