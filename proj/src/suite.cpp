#include "kplab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kplab/capacity.hpp"
#include "kplab/config_space.hpp"
#include "kplab/costa.hpp"
#include "kplab/errors.hpp"
#include "kplab/flow.hpp"
#include "kplab/gauss_mixture.hpp"
#include "kplab/geo_volume.hpp"
#include "kplab/kp_verify.hpp"
#include "kplab/minty.hpp"
#include "kplab/report.hpp"
#include "kplab/rng.hpp"

namespace kplab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Compact deterministic formatting for summary strings.
std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return std::string(buf);
}

// Sequential convenience wrapper over the counter-based generator, used for
// instance generation only (estimators manage their own streams).
class SeqDraw {
 public:
  explicit SeqDraw(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t pick(std::uint64_t n) { return rng_.index(counter_++, n); }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

Eigen::VectorXd draw_weights(SeqDraw& d, int k) {
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) w(i) = 0.2 + d.uniform();
  w /= w.sum();
  return w;
}

Eigen::MatrixXd draw_points(SeqDraw& d, int k, int dim, double spread) {
  Eigen::MatrixXd pts(k, dim);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < dim; ++j) pts(i, j) = d.uniform(-spread, spread);
  return pts;
}

PointConfiguration draw_config(std::uint64_t seed, int dim, int k,
                               double spread) {
  SeqDraw d(seed);
  Eigen::MatrixXd pts = draw_points(d, k, dim, spread);
  Eigen::VectorXd w = draw_weights(d, k);
  return PointConfiguration(dim, std::move(pts), std::move(w));
}

ContractionMethod method_cycle(int i) {
  switch (i % 4) {
    case 0: return ContractionMethod::Scaling;
    case 1: return ContractionMethod::Projection;
    case 2: return ContractionMethod::Composition;
    default: return ContractionMethod::Folding;
  }
}

std::string method_label(ContractionMethod m) {
  switch (m) {
    case ContractionMethod::Scaling: return "scaling";
    case ContractionMethod::Projection: return "projection";
    case ContractionMethod::Composition: return "composition";
    default: return "folding";
  }
}

QuadratureSpec grid_for_dim(int dim) {
  QuadratureSpec spec;
  spec.points_per_axis = (dim <= 1) ? 4001 : 1201;
  spec.padding_sigmas = 10.0;
  return spec;
}

void maybe_write(const CsvTable& table, const std::filesystem::path& out_dir,
                 const char* name) {
  if (!out_dir.empty()) table.write(out_dir / name);
}

// ---------------------------------------------------------------------------
// 1. Oracle agreement: closed-form integer-order entropies vs quadrature
//    (1e-6 relative) and Monte Carlo at N = 10^6 (3 standard errors).
// ---------------------------------------------------------------------------
CriterionResult criterion_oracle_agreement(std::uint64_t seed,
                                           const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"mixture", "dim", "k", "s", "alpha", "exact", "quadrature",
                  "monte_carlo", "mc_std_err", "rel_quad_err", "mc_z"});
  const double s_values[3] = {0.25, 1.0, 4.0};
  double worst_rel = 0.0, worst_z = 0.0;
  int comparisons = 0, failures = 0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + (i % 2);
    const int k = 1 + (i % 5);
    const double s = s_values[i % 3];
    const PointConfiguration config =
        draw_config(derive_seed(seed, "oracle-mixture", i), dim, k, 2.5);
    const GaussianMixture m = GaussianMixture::isotropic(config, s);
    const QuadratureSpec spec = grid_for_dim(dim);
    for (int alpha = 2; alpha <= 3; ++alpha) {
      const EntropyEstimate exact = renyi_exact_integer(m, alpha);
      const EntropyEstimate quad = renyi_quadrature(m, alpha, spec);
      const EntropyEstimate mc = renyi_monte_carlo(
          m, alpha, 1000000,
          derive_seed(seed, "oracle-mc", 2 * static_cast<std::uint64_t>(i) +
                                             (alpha - 2)));
      const double rel =
          std::abs(quad.value - exact.value) / std::max(1e-12, std::abs(exact.value));
      const double z = std::abs(mc.value - exact.value) /
                       std::max(1e-300, mc.std_err);
      worst_rel = std::max(worst_rel, rel);
      worst_z = std::max(worst_z, z);
      ++comparisons;
      if (rel > 1e-6 || z > 3.0) ++failures;
      table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                     csv_num(s), csv_num(alpha), csv_num(exact.value),
                     csv_num(quad.value), csv_num(mc.value),
                     csv_num(mc.std_err), csv_num(rel), csv_num(z)});
    }
  }
  maybe_write(table, out_dir, "oracle_agreement.csv");
  CriterionResult r;
  r.number = 1;
  r.name = "oracle-agreement";
  r.seconds = seconds_since(t0);
  r.passed = (failures == 0) && (r.seconds < 120.0);
  r.detail = "comparisons=" + std::to_string(comparisons) +
             " failures=" + std::to_string(failures) +
             " worst_rel=" + short_num(worst_rel) +
             " worst_z=" + short_num(worst_z);
  return r;
}

// ---------------------------------------------------------------------------
// 2. Entropy contraction sweep: 200 pairs x 5 orders x 3 noise levels,
//    zero VIOLATION verdicts.
// ---------------------------------------------------------------------------
CriterionResult criterion_entropy_contraction(std::uint64_t seed,
                                              const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"pair", "map", "dim", "k", "alpha", "s", "h_source",
                  "h_target", "gap", "std_err", "method", "verdict"});
  const std::vector<double> orders = {0.5, 1.0, 2.0, 3.0, kInf};
  const std::vector<double> noises = {0.25, 1.0, 4.0};
  int holds = 0, noise_holds = 0, violations = 0, skipped = 0;
  double worst_margin = kInf;
  for (int i = 0; i < 200; ++i) {
    const int phase = i % 5;  // 2:2:1 split over dimensions 1, 2, 3
    const int dim = (phase < 2) ? 1 : (phase < 4) ? 2 : 3;
    const int k = 2 + (i * 3) % 7;
    const ContractionMethod method = method_cycle(i);
    const PointConfiguration source =
        draw_config(derive_seed(seed, "kp-source", i), dim, k, 2.0);
    const ContractionPair pair =
        random_contraction(source, method, derive_seed(seed, "kp-map", i));
    EstimatorPolicy policy;
    policy.kind = PolicyKind::Auto;
    policy.grid = grid_for_dim(dim);
    policy.mc_samples = 100000;
    policy.seed = derive_seed(seed, "kp-policy", i);
    const KpReport report = verify_kp_entropy(pair, orders, noises, policy,
                                              "pair-" + std::to_string(i));
    for (const KpRow& row : report.rows) {
      switch (row.verdict) {
        case Verdict::Holds: ++holds; break;
        case Verdict::HoldsWithinNoise: ++noise_holds; break;
        case Verdict::Violation: ++violations; break;
        case Verdict::Skipped: ++skipped; break;
      }
      if (row.verdict != Verdict::Skipped) {
        const double allowance =
            std::max(1e-6, 3.0 * row.combined_std_err);
        worst_margin = std::min(worst_margin, row.gap + allowance);
      }
      table.add_row({std::to_string(i), method_label(method),
                     std::to_string(dim), std::to_string(k),
                     csv_num(row.order), csv_num(row.noise),
                     csv_num(row.source.value), csv_num(row.target.value),
                     csv_num(row.gap), csv_num(row.combined_std_err),
                     method_name(row.source.method), verdict_name(row.verdict)});
    }
  }
  maybe_write(table, out_dir, "entropy_contraction.csv");
  CriterionResult r;
  r.number = 2;
  r.name = "entropy-contraction";
  r.seconds = seconds_since(t0);
  r.passed = (violations == 0) && (skipped == 0) && (r.seconds < 1800.0);
  r.detail = "holds=" + std::to_string(holds) +
             " within_noise=" + std::to_string(noise_holds) +
             " violations=" + std::to_string(violations) +
             " skipped=" + std::to_string(skipped) +
             " worst_margin=" + short_num(worst_margin);
  return r;
}

// ---------------------------------------------------------------------------
// Shared trajectory instances for checks 3-5.
// ---------------------------------------------------------------------------
struct LiftCase {
  int index = 0;
  int base_dim = 1;
  int k = 2;
  ContractionPair pair;
  BezdekConnellyLift lift;
};

std::vector<LiftCase> build_lifts(std::uint64_t seed) {
  std::vector<LiftCase> lifts;
  lifts.reserve(25);
  for (int i = 0; i < 25; ++i) {
    const int base_dim = (i < 20) ? 1 : 2;  // lift doubles the dimension
    const int k = 2 + (i * 5) % 5;          // 2..6
    const PointConfiguration source =
        draw_config(derive_seed(seed, "lift-source", i), base_dim, k, 1.6);
    ContractionPair pair = random_contraction(
        source, method_cycle(i), derive_seed(seed, "lift-map", i));
    BezdekConnellyLift lift(pair);
    lifts.push_back(LiftCase{i, base_dim, k, std::move(pair), std::move(lift)});
  }
  return lifts;
}

std::vector<double> unit_grid(int points) {
  std::vector<double> grid(points);
  for (int j = 0; j < points; ++j)
    grid[j] = static_cast<double>(j) / (points - 1);
  return grid;
}

// ---------------------------------------------------------------------------
// 3. Functional monotonicity along the trigonometric flow: the quadratic
//    integral (exact path) and the xlogx integral are nondecreasing in t.
// ---------------------------------------------------------------------------
CriterionResult criterion_functional_monotonicity(
    std::uint64_t seed, const std::vector<LiftCase>& lifts,
    const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"lift", "dim", "k", "t", "power2", "power2_std_err", "xlogx",
                  "xlogx_std_err"});
  const std::vector<double> t_grid = unit_grid(21);
  const double flow_s = 1.0;
  double worst_power_step = kInf, worst_xlogx_margin = kInf;
  int bad_steps = 0;
  for (const LiftCase& lc : lifts) {
    EstimatorPolicy policy;
    policy.kind = PolicyKind::Auto;
    policy.grid.points_per_axis = 801;
    policy.grid.padding_sigmas = 10.0;
    policy.mc_samples = 30000;
    policy.seed = derive_seed(seed, "flow-policy", lc.index);
    const auto power2 = functional_along_flow(
        lc.lift, ConvexFunctionalSpec::power(2.0), flow_s, t_grid, policy);
    const auto xlogx = functional_along_flow(
        lc.lift, ConvexFunctionalSpec::xlogx(), flow_s, t_grid, policy);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      table.add_row({std::to_string(lc.index), std::to_string(lc.lift.dim()),
                     std::to_string(lc.k), csv_num(t_grid[j]),
                     csv_num(power2[j].value), csv_num(power2[j].std_err),
                     csv_num(xlogx[j].value), csv_num(xlogx[j].std_err)});
      if (j == 0) continue;
      const double p_step = power2[j].value - power2[j - 1].value;
      worst_power_step = std::min(worst_power_step, p_step);
      if (p_step < -1e-8) ++bad_steps;
      const double x_step = xlogx[j].value - xlogx[j - 1].value;
      const double step_se = std::hypot(xlogx[j].std_err, xlogx[j - 1].std_err);
      const double allowance = std::max(1e-8, 3.0 * step_se);
      worst_xlogx_margin = std::min(worst_xlogx_margin, x_step + allowance);
      if (x_step < -allowance) ++bad_steps;
    }
  }
  maybe_write(table, out_dir, "flow_monotonicity.csv");
  CriterionResult r;
  r.number = 3;
  r.name = "functional-monotonicity";
  r.seconds = seconds_since(t0);
  r.passed = (bad_steps == 0);
  r.detail = "lifts=" + std::to_string(lifts.size()) +
             " bad_steps=" + std::to_string(bad_steps) +
             " min_power2_step=" + short_num(worst_power_step) +
             " min_xlogx_margin=" + short_num(worst_xlogx_margin);
  return r;
}

// ---------------------------------------------------------------------------
// 4. Divergence of the smoothed velocity field: nonpositive (<= 1e-9) and
//    equal to the finite-difference divergence within 1e-6.
// ---------------------------------------------------------------------------
CriterionResult criterion_divergence_identity(
    std::uint64_t seed, const std::vector<LiftCase>& lifts,
    const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"lift", "t", "max_divergence", "max_fd_error"});
  const std::vector<double> t_grid = unit_grid(21);
  const double flow_s = 1.0;
  const double h = 1e-4;
  double global_max_div = -kInf, global_max_fd = 0.0;
  for (const LiftCase& lc : lifts) {
    const int dim = lc.lift.dim();
    for (std::size_t jt = 0; jt < t_grid.size(); ++jt) {
      const double t = t_grid[jt];
      const GaussianMixture state = smoothed_state(lc.lift, t, flow_s);
      const std::uint64_t pt_seed = derive_seed(
          seed, "divergence-points",
          static_cast<std::uint64_t>(lc.index) * 1000 + jt);
      double max_div = -kInf, max_fd = 0.0;
      for (int p = 0; p < 100; ++p) {
        const Eigen::VectorXd x = state.sample(pt_seed, p);
        const DiscretePosterior post = posterior(lc.lift, t, x, flow_s);
        const double div = convolved_divergence(post);
        double fd = 0.0;
        for (int d = 0; d < dim; ++d) {
          Eigen::VectorXd xp = x, xm = x;
          xp(d) += h;
          xm(d) -= h;
          fd += (convolved_velocity(lc.lift, t, xp, flow_s)(d) -
                 convolved_velocity(lc.lift, t, xm, flow_s)(d)) /
                (2.0 * h);
        }
        max_div = std::max(max_div, div);
        max_fd = std::max(max_fd, std::abs(div - fd));
      }
      global_max_div = std::max(global_max_div, max_div);
      global_max_fd = std::max(global_max_fd, max_fd);
      table.add_row({std::to_string(lc.index), csv_num(t), csv_num(max_div),
                     csv_num(max_fd)});
    }
  }
  maybe_write(table, out_dir, "flow_divergence.csv");
  CriterionResult r;
  r.number = 4;
  r.name = "divergence-identity";
  r.seconds = seconds_since(t0);
  r.passed = (global_max_div <= 1e-9) && (global_max_fd <= 1e-6);
  r.detail = "max_divergence=" + short_num(global_max_div) +
             " max_fd_error=" + short_num(global_max_fd);
  return r;
}

// ---------------------------------------------------------------------------
// 5. Velocity monotonicity: pairwise <v_i - v_j, x_i - x_j> <= 1e-8 along
//    every lift.
// ---------------------------------------------------------------------------
CriterionResult criterion_velocity_monotonicity(
    const std::vector<LiftCase>& lifts, const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"lift", "dim", "k", "max_pairwise_inner"});
  const std::vector<double> t_grid = unit_grid(21);
  double global_max = -kInf;
  for (const LiftCase& lc : lifts) {
    const double m = velocity_monotonicity_max(lc.lift, t_grid);
    global_max = std::max(global_max, m);
    table.add_row({std::to_string(lc.index), std::to_string(lc.lift.dim()),
                   std::to_string(lc.k), csv_num(m)});
  }
  maybe_write(table, out_dir, "velocity_monotonicity.csv");
  CriterionResult r;
  r.number = 5;
  r.name = "velocity-monotonicity";
  r.seconds = seconds_since(t0);
  r.passed = (global_max <= 1e-8);
  r.detail = "max_pairwise_inner=" + short_num(global_max);
  return r;
}

// ---------------------------------------------------------------------------
// 6. Monotone extension: 100 instances all feasible; the constant-
//    substitution identity holds to 1e-12.
// ---------------------------------------------------------------------------
CriterionResult criterion_monotone_extension(std::uint64_t seed,
                                             const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"instance", "dim", "k", "kind", "min_constraint_inner",
                  "identity_residual"});
  int feasible = 0, failures = 0;
  double worst_inner = kInf, worst_identity = 0.0;
  for (int i = 0; i < 100; ++i) {
    SeqDraw d(derive_seed(seed, "minty-instance", i));
    const int dim = 1 + (i % 4);
    const int k = 2 + (i * 5) % 9;  // 2..10
    const int kind = i % 3;
    const Eigen::MatrixXd xs = draw_points(d, k, dim, 2.0);
    Eigen::MatrixXd ys(k, dim);
    if (kind == 0) {
      // Positive-semidefinite linear map plus offset.
      Eigen::MatrixXd mfac(dim, dim);
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) mfac(a, b) = d.uniform(-1.0, 1.0);
      const Eigen::MatrixXd psd =
          mfac.transpose() * mfac / dim + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
      Eigen::VectorXd offset(dim);
      for (int a = 0; a < dim; ++a) offset(a) = d.uniform(-1.0, 1.0);
      ys = xs * psd.transpose();
      ys.rowwise() += offset.transpose();
    } else {
      Eigen::VectorXd center(dim);
      for (int a = 0; a < dim; ++a) center(a) = d.uniform(-1.0, 1.0);
      const double radius = d.uniform(0.5, 2.0);
      for (int a = 0; a < k; ++a) {
        const Eigen::VectorXd xrow = xs.row(a).transpose();
        const Eigen::VectorXd projected = project_to_ball(xrow, center, radius);
        ys.row(a) = (kind == 1 ? projected
                               : (0.4 * xrow + 0.6 * projected).eval())
                        .transpose();
      }
    }
    Eigen::VectorXd lambda(k);
    for (int a = 0; a < k; ++a) lambda(a) = 0.05 + d.uniform();
    lambda /= lambda.sum();
    const Eigen::VectorXd x0 = xs.transpose() * lambda;

    double min_inner = kInf;
    bool ok = true;
    try {
      const MonotonePairs pairs(xs, ys);
      const Eigen::VectorXd y0 = extend_monotone(pairs, x0);
      for (int a = 0; a < k; ++a) {
        const double inner =
            (x0 - xs.row(a).transpose()).dot(y0 - ys.row(a).transpose());
        min_inner = std::min(min_inner, inner);
      }
      if (min_inner < -1e-9) ok = false;
    } catch (const Error&) {
      ok = false;
      min_inner = -kInf;
    }

    // Constant-substitution identity: sum_i p_i <v_i - w, c_i - mean> is the
    // same for every w because the p-weighted deviations sum to zero.
    Eigen::VectorXd p = draw_weights(d, k);
    Eigen::MatrixXd vel(k, dim);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < dim; ++b) vel(a, b) = d.uniform(-2.0, 2.0);
    Eigen::VectorXd w_subst(dim);
    for (int a = 0; a < dim; ++a) w_subst(a) = d.uniform(-5.0, 5.0);
    const Eigen::VectorXd mean = xs.transpose() * p;
    double d_zero = 0.0, d_subst = 0.0;
    for (int a = 0; a < k; ++a) {
      const Eigen::VectorXd dev = xs.row(a).transpose() - mean;
      d_zero += p(a) * vel.row(a).dot(dev);
      d_subst += p(a) * (vel.row(a).transpose() - w_subst).dot(dev);
    }
    const double identity_residual = std::abs(d_zero - d_subst);
    worst_identity = std::max(worst_identity, identity_residual);
    if (identity_residual > 1e-12) ok = false;

    if (ok) ++feasible; else ++failures;
    if (std::isfinite(min_inner)) worst_inner = std::min(worst_inner, min_inner);
    table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                   std::to_string(kind), csv_num(min_inner),
                   csv_num(identity_residual)});
  }
  maybe_write(table, out_dir, "monotone_extension.csv");
  CriterionResult r;
  r.number = 6;
  r.name = "monotone-extension";
  r.seconds = seconds_since(t0);
  r.passed = (failures == 0);
  r.detail = "feasible=" + std::to_string(feasible) +
             " failures=" + std::to_string(failures) +
             " min_inner=" + short_num(worst_inner) +
             " max_identity_residual=" + short_num(worst_identity);
  return r;
}

// ---------------------------------------------------------------------------
// 7. Entropy-power concavity in the noise parameter, plus the monotone
//    reformulation over the scaling parameter.
// ---------------------------------------------------------------------------
CriterionResult criterion_entropy_power_concavity(
    std::uint64_t seed, const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"config", "dim", "k", "s0", "series", "grid_value", "value",
                  "std_err"});
  int bad = 0;
  double worst_d2 = -kInf, worst_k1 = 0.0, worst_abeta_margin = kInf;
  std::vector<double> s_grid;
  for (int j = 0; j < 8; ++j) s_grid.push_back(0.5 + 0.5 * j);
  const std::vector<double> beta_grid = unit_grid(11);
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + (i % 2);
    const int k = (i < 4) ? 1 : 2 + (i % 4);
    const double s0 = 0.25 * (i % 4);
    const PointConfiguration base =
        draw_config(derive_seed(seed, "concavity-config", i), dim, k, 1.5);
    const SmoothedConfig x(base, s0);
    EstimatorPolicy policy;
    policy.kind = PolicyKind::Quadrature;
    policy.grid.points_per_axis = (dim == 1) ? 4001 : 801;
    policy.grid.padding_sigmas = 8.0;
    policy.seed = derive_seed(seed, "concavity-policy", i);
    const CostaReport report = costa_concavity_report(x, s_grid, policy);
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
      table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                     csv_num(s0), "entropy_power", csv_num(s_grid[j]),
                     csv_num(report.entropy_power[j]),
                     csv_num(report.entropy_power_std_err[j])});
    }
    for (std::size_t j = 0; j < report.second_difference.size(); ++j) {
      const double d2 = report.second_difference[j];
      const double allowance =
          std::max(1e-9, 3.0 * report.second_difference_std_err[j]);
      worst_d2 = std::max(worst_d2, d2);
      if (d2 > allowance) ++bad;
      if (k == 1) {
        worst_k1 = std::max(worst_k1, std::abs(d2));
        if (std::abs(d2) > 1e-9) ++bad;
      }
      table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                     csv_num(s0), "second_difference", csv_num(s_grid[j + 1]),
                     csv_num(d2),
                     csv_num(report.second_difference_std_err[j])});
    }
    if (s0 > 0.0) {
      const ABetaSeries series = a_beta_series(x, beta_grid, policy);
      for (std::size_t j = 0; j < series.beta.size(); ++j) {
        table.add_row({std::to_string(i), std::to_string(dim),
                       std::to_string(k), csv_num(s0), "a_beta",
                       csv_num(series.beta[j]), csv_num(series.value[j]),
                       csv_num(series.std_err[j])});
        if (j == 0) continue;
        const double step = series.value[j] - series.value[j - 1];
        const double step_se =
            std::hypot(series.std_err[j], series.std_err[j - 1]);
        const double allowance = std::max(1e-9, 3.0 * step_se);
        worst_abeta_margin = std::min(worst_abeta_margin, step + allowance);
        if (step < -allowance) ++bad;
      }
    }
  }
  maybe_write(table, out_dir, "concavity.csv");
  CriterionResult r;
  r.number = 7;
  r.name = "entropy-power-concavity";
  r.seconds = seconds_since(t0);
  r.passed = (bad == 0);
  r.detail = "violations=" + std::to_string(bad) +
             " max_second_diff=" + short_num(worst_d2) +
             " max_k1_abs=" + short_num(worst_k1) +
             " min_abeta_margin=" + short_num(worst_abeta_margin);
  return r;
}

// ---------------------------------------------------------------------------
// 8. Unified inequality for linear contractions, including the exact
//    equality case (identity map) and the pure-EPI case (zero map).
// ---------------------------------------------------------------------------
CriterionResult criterion_unified_inequality(std::uint64_t seed,
                                             const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"instance", "dim", "k", "s0", "map", "lipschitz",
                  "n_x_plus_z", "n_ax_plus_z", "n_x", "gap", "std_err",
                  "verdict"});
  int violations = 0, identity_failures = 0;
  double worst_gap = kInf, worst_identity = 0.0;
  for (int i = 0; i < 20; ++i) {
    SeqDraw d(derive_seed(seed, "unified-map", i));
    const int dim = 1 + (i % 2);
    const int k = 1 + (i % 4);
    const double s0 = 0.25 + 0.25 * (i % 3);
    const PointConfiguration base =
        draw_config(derive_seed(seed, "unified-config", i), dim, k, 1.5);
    const int map_kind = i % 5;
    Eigen::MatrixXd map = Eigen::MatrixXd::Identity(dim, dim);
    std::string map_label = "identity";
    if (map_kind == 1) {
      map.setZero();
      map_label = "zero";
    } else if (map_kind == 2) {
      map *= 0.6;
      map_label = "homothety";
    } else if (map_kind == 3) {
      if (dim == 1) {
        map(0, 0) = -0.85;
      } else {
        const double theta = d.uniform(0.0, 2.0 * std::numbers::pi);
        map << std::cos(theta), -std::sin(theta), std::sin(theta),
            std::cos(theta);
        map *= 0.85;
      }
      map_label = "scaled_rotation";
    } else if (map_kind == 4) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) map(a, b) = d.uniform(-1.0, 1.0);
      const double norm = map.jacobiSvd().singularValues()(0);
      map *= 0.9 / std::max(norm, 1e-12);
      map_label = "random_contraction";
    }
    const SmoothedConfig x(base, s0, map);
    EstimatorPolicy policy;
    policy.kind = PolicyKind::Quadrature;
    policy.grid.points_per_axis = (dim == 1) ? 4001 : 801;
    policy.grid.padding_sigmas = 8.0;
    policy.seed = derive_seed(seed, "unified-policy", i);
    const UnifiedInequalityResult res = unified_inequality_check(x, policy);
    if (res.verdict == Verdict::Violation) ++violations;
    worst_gap = std::min(worst_gap, res.gap);
    if (map_kind == 0) {
      worst_identity = std::max(worst_identity, std::abs(res.gap));
      if (std::abs(res.gap) > 1e-9) ++identity_failures;
    }
    table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                   csv_num(s0), map_label, csv_num(res.lipschitz),
                   csv_num(res.n_x_plus_z), csv_num(res.n_ax_plus_z),
                   csv_num(res.n_x), csv_num(res.gap), csv_num(res.std_err),
                   verdict_name(res.verdict)});
  }
  maybe_write(table, out_dir, "unified_inequality.csv");
  CriterionResult r;
  r.number = 8;
  r.name = "unified-inequality";
  r.seconds = seconds_since(t0);
  r.passed = (violations == 0) && (identity_failures == 0);
  r.detail = "violations=" + std::to_string(violations) +
             " identity_failures=" + std::to_string(identity_failures) +
             " min_gap=" + short_num(worst_gap) +
             " max_identity_gap=" + short_num(worst_identity);
  return r;
}

// ---------------------------------------------------------------------------
// 9. Capacity: binary-alphabet oracle agreement, monotone lower bounds, and
//    the contraction comparison on 30 pairs.
// ---------------------------------------------------------------------------
CriterionResult criterion_capacity(std::uint64_t seed,
                                   const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"row", "dim", "k", "map", "c_source", "c_target", "gap",
                  "bracket_sum", "pointwise_ok", "monotone_ok", "verdict"});
  int violations = 0, monotone_failures = 0;
  const auto history_monotone = [](const CapacityResult& res) {
    for (std::size_t j = 1; j < res.history.size(); ++j) {
      if (res.history[j].mutual_information <
          res.history[j - 1].mutual_information - 1e-10)
        return false;
    }
    return true;
  };

  // Binary symmetric alphabet against a brute-force weight grid.
  Eigen::MatrixXd binary_pts(2, 1);
  binary_pts << -1.0, 1.0;
  const PointConfiguration binary = PointConfiguration::uniform(1, binary_pts);
  QuadratureSpec grid1;
  grid1.points_per_axis = 2001;
  grid1.padding_sigmas = 8.0;
  const CapacityResult binary_ba = blahut_arimoto(
      binary, 1.0, 1e-6, 2000, grid1, 20000, derive_seed(seed, "capacity-binary", 0));
  if (!history_monotone(binary_ba)) ++monotone_failures;
  EstimatorPolicy oracle_policy;
  oracle_policy.kind = PolicyKind::Quadrature;
  oracle_policy.grid = grid1;
  double grid_best = 0.0;
  for (int j = 1; j <= 999; ++j) {
    Eigen::VectorXd w(2);
    w << 1e-3 * j, 1.0 - 1e-3 * j;
    grid_best = std::max(
        grid_best, channel_mutual_information(binary, w, 1.0, oracle_policy));
  }
  const double binary_diff = std::abs(binary_ba.capacity - grid_best);
  const bool binary_ok = binary_diff <= 1e-3;
  table.add_row({"binary", "1", "2", "none", csv_num(binary_ba.capacity),
                 csv_num(grid_best), csv_num(binary_ba.capacity - grid_best),
                 csv_num(binary_ba.upper - binary_ba.lower), "1",
                 history_monotone(binary_ba) ? "1" : "0", "holds"});

  for (int i = 0; i < 30; ++i) {
    const int dim = (i < 15) ? 1 : 2;
    const int k = 2 + (i % 4);
    const PointConfiguration source =
        draw_config(derive_seed(seed, "capacity-source-cfg", i), dim, k, 2.0);
    const ContractionPair pair = random_contraction(
        source, method_cycle(i), derive_seed(seed, "capacity-map", i));
    QuadratureSpec grid;
    grid.points_per_axis = (dim == 1) ? 2001 : 401;
    grid.padding_sigmas = 8.0;
    const CapacityComparison cmp = capacity_contraction_check(
        pair, 1.0, 1e-4, grid, 20000, derive_seed(seed, "capacity-check", i));
    const bool mono =
        history_monotone(cmp.source) && history_monotone(cmp.target);
    if (!mono) ++monotone_failures;
    if (cmp.verdict == Verdict::Violation) ++violations;
    table.add_row({std::to_string(i), std::to_string(dim), std::to_string(k),
                   method_label(method_cycle(i)), csv_num(cmp.source.capacity),
                   csv_num(cmp.target.capacity), csv_num(cmp.gap),
                   csv_num((cmp.source.upper - cmp.source.lower) +
                           (cmp.target.upper - cmp.target.lower)),
                   cmp.pointwise_ok ? "1" : "0", mono ? "1" : "0",
                   verdict_name(cmp.verdict)});
  }
  maybe_write(table, out_dir, "capacity.csv");
  CriterionResult r;
  r.number = 9;
  r.name = "capacity-contraction";
  r.seconds = seconds_since(t0);
  r.passed = binary_ok && (violations == 0) && (monotone_failures == 0) &&
             (r.seconds < 300.0);
  r.detail = "binary_diff=" + short_num(binary_diff) +
             " violations=" + std::to_string(violations) +
             " monotone_failures=" + std::to_string(monotone_failures);
  return r;
}

// ---------------------------------------------------------------------------
// 10. Geometric union volumes: the two-disk lens oracle and 30 planar pairs.
// ---------------------------------------------------------------------------
CriterionResult criterion_geometric_volume(std::uint64_t seed,
                                           const std::filesystem::path& out_dir) {
  const auto t0 = Clock::now();
  CsvTable table({"row", "k", "radius", "vol_source", "vol_target", "gap",
                  "std_err", "verdict"});
  // Two unit disks with centers one apart: union = 2pi - lens overlap.
  Eigen::MatrixXd disk_centers(2, 2);
  disk_centers << 0.0, 0.0, 1.0, 0.0;
  const BallUnion disks(disk_centers, 1.0);
  const VolumeEstimate lens_est =
      union_volume_mc(disks, 1000000, derive_seed(seed, "geometry-lens", 0));
  const double d = 1.0;
  const double lens_exact =
      2.0 * std::numbers::pi -
      (2.0 * std::acos(d / 2.0) - (d / 2.0) * std::sqrt(4.0 - d * d));
  const double lens_z =
      std::abs(lens_est.volume - lens_exact) / std::max(1e-300, lens_est.std_err);
  const bool lens_ok = lens_z <= 3.0;
  table.add_row({"lens", "2", csv_num(1.0), csv_num(lens_est.volume),
                 csv_num(lens_exact), csv_num(lens_est.volume - lens_exact),
                 csv_num(lens_est.std_err), lens_ok ? "consistent" : "INCONSISTENT"});

  int inconsistent = 0, within_noise = 0;
  const double radii[3] = {0.8, 1.1, 1.4};
  for (int i = 0; i < 30; ++i) {
    const int k = 2 + (i % 5);
    const PointConfiguration source =
        draw_config(derive_seed(seed, "geometry-config", i), 2, k, 2.2);
    const ContractionPair pair = random_contraction(
        source, method_cycle(i), derive_seed(seed, "geometry-map", i));
    const GeoCheck check = kp_geometric_check(
        pair, radii[i % 3], 200000, derive_seed(seed, "geometry-check", i));
    if (check.verdict == GeoVerdict::Inconsistent) ++inconsistent;
    if (check.verdict == GeoVerdict::InconsistentWithinNoise) ++within_noise;
    table.add_row({std::to_string(i), std::to_string(k), csv_num(radii[i % 3]),
                   csv_num(check.source.volume), csv_num(check.target.volume),
                   csv_num(check.gap), csv_num(check.combined_std_err),
                   geo_verdict_name(check.verdict)});
  }
  maybe_write(table, out_dir, "geometry.csv");
  CriterionResult r;
  r.number = 10;
  r.name = "geometric-volume";
  r.seconds = seconds_since(t0);
  r.passed = lens_ok && (inconsistent == 0) && (within_noise == 0);
  r.detail = "lens_z=" + short_num(lens_z) +
             " inconsistent=" + std::to_string(inconsistent) +
             " within_noise=" + std::to_string(within_noise);
  return r;
}

}  // namespace

SuiteResult run_suite(std::uint64_t seed, const std::filesystem::path& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  SuiteResult result;
  result.criteria.push_back(criterion_oracle_agreement(seed, out_dir));
  result.criteria.push_back(criterion_entropy_contraction(seed, out_dir));
  const std::vector<LiftCase> lifts = build_lifts(seed);
  result.criteria.push_back(
      criterion_functional_monotonicity(seed, lifts, out_dir));
  result.criteria.push_back(criterion_divergence_identity(seed, lifts, out_dir));
  result.criteria.push_back(criterion_velocity_monotonicity(lifts, out_dir));
  result.criteria.push_back(criterion_monotone_extension(seed, out_dir));
  result.criteria.push_back(criterion_entropy_power_concavity(seed, out_dir));
  result.criteria.push_back(criterion_unified_inequality(seed, out_dir));
  result.criteria.push_back(criterion_capacity(seed, out_dir));
  result.criteria.push_back(criterion_geometric_volume(seed, out_dir));

  if (!out_dir.empty()) {
    CsvTable summary({"check", "name", "passed", "detail"});
    for (const CriterionResult& c : result.criteria) {
      summary.add_row({std::to_string(c.number), c.name,
                       c.passed ? "1" : "0", c.detail});
    }
    summary.write(out_dir / "summary.csv");
  }
  return result;
}

}  // namespace kplab
