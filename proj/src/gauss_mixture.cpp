#include "kplab/gauss_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "kplab/parallel.hpp"
#include "kplab/rng.hpp"

namespace kplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2π)

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// Streaming log-sum-exp accumulator (max-shifted).
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == -kInf) {
      return;
    }
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double value() const {
    return (max_ == -kInf) ? -kInf : max_ + std::log(sum_);
  }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

double pow_order(double f, double alpha) {
  if (alpha == 2.0) {
    return f * f;
  }
  if (alpha == 3.0) {
    return f * f * f;
  }
  if (alpha == 0.5) {
    return std::sqrt(f);
  }
  return std::pow(f, alpha);
}

}  // namespace

GaussianMixture::GaussianMixture(Eigen::MatrixXd centers,
                                 Eigen::VectorXd weights,
                                 Eigen::MatrixXd covariance)
    : centers_(std::move(centers)),
      weights_(std::move(weights)),
      covariance_(std::move(covariance)) {
  const Eigen::Index k = centers_.rows();
  const Eigen::Index n = centers_.cols();
  if (k == 0) {
    throw EmptyConfiguration("a mixture needs at least one component");
  }
  if (n == 0) {
    throw DimensionMismatch("mixture dimension must be positive");
  }
  if (weights_.size() != k) {
    throw DimensionMismatch("got " + std::to_string(weights_.size()) +
                            " weights for " + std::to_string(k) +
                            " components");
  }
  if (covariance_.rows() != n || covariance_.cols() != n) {
    throw DimensionMismatch("covariance must be " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw NonPositiveWeightSum("component weight " + std::to_string(i) +
                                 " is negative or not finite");
    }
  }
  const double wsum = weights_.sum();
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw NonPositiveWeightSum("component weights sum to " +
                               std::to_string(wsum) + ", expected 1");
  }
  weights_ /= wsum;
  const double scale = covariance_.cwiseAbs().maxCoeff();
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, scale)) {
    throw Error("covariance matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw Error("covariance matrix is not positive definite");
  }
  cholesky_lower_ = llt.matrixL();
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  log_det_ = 2.0 * cholesky_lower_.diagonal().array().log().sum();
  log_norm_ = 0.5 * static_cast<double>(n) * kLog2Pi + 0.5 * log_det_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance_);
  max_eigenvalue_ = eigen.eigenvalues().maxCoeff();
  const double s = covariance_(0, 0);
  isotropic_ =
      (covariance_ - s * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() ==
      0.0;
  log_weights_ = weights_.array().log();
  cumulative_weights_.resize(k);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    acc += weights_[i];
    cumulative_weights_[i] = acc;
  }
  cumulative_weights_[k - 1] = 1.0;
}

GaussianMixture GaussianMixture::isotropic(const PointConfiguration& config,
                                           double s) {
  return isotropic(config.points(), config.weights(), s);
}

GaussianMixture GaussianMixture::isotropic(Eigen::MatrixXd centers,
                                           Eigen::VectorXd weights, double s) {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + fmt(s));
  }
  const Eigen::Index n = centers.cols();
  return GaussianMixture(std::move(centers), std::move(weights),
                         s * Eigen::MatrixXd::Identity(n, n));
}

double GaussianMixture::log_density(const Eigen::VectorXd& x) const {
  const int n = dim();
  if (x.size() != n) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) +
                            " coordinates, expected " + std::to_string(n));
  }
  const int k = components();
  LogSumExp lse;
  if (isotropic_) {
    const double inv_s = 1.0 / covariance_(0, 0);
    for (int i = 0; i < k; ++i) {
      if (weights_[i] == 0.0) {
        continue;
      }
      const double q =
          (x.transpose() - centers_.row(i)).squaredNorm() * inv_s;
      lse.add(log_weights_[i] - 0.5 * q - log_norm_);
    }
  } else {
    for (int i = 0; i < k; ++i) {
      if (weights_[i] == 0.0) {
        continue;
      }
      double q = 0.0;
      for (int a = 0; a < n; ++a) {
        const double da = x[a] - centers_(i, a);
        for (int b = 0; b < n; ++b) {
          q += da * inverse_(a, b) * (x[b] - centers_(i, b));
        }
      }
      lse.add(log_weights_[i] - 0.5 * q - log_norm_);
    }
  }
  return lse.value();
}

Eigen::VectorXd GaussianMixture::sample(std::uint64_t seed,
                                        std::uint64_t index) const {
  const CounterRng rng(seed);
  const int n = dim();
  const int k = components();
  // Slots 0..2n-1 feed the normal pairs; slot 2n picks the component.
  const double u = rng.uniform(index, 2 * static_cast<std::uint64_t>(n));
  int comp = 0;
  while (comp < k - 1 && u > cumulative_weights_[comp]) {
    ++comp;
  }
  Eigen::VectorXd x = centers_.row(comp).transpose();
  for (int a = 0; a < n; ++a) {
    const double z = rng.normal(index, static_cast<std::uint64_t>(a));
    for (int b = a; b < n; ++b) {
      x[b] += cholesky_lower_(b, a) * z;
    }
  }
  return x;
}

std::string method_name(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::ExactInteger:
      return "exact-integer";
    case EntropyMethod::Quadrature:
      return "quadrature";
    case EntropyMethod::MonteCarlo:
      return "monte-carlo";
    case EntropyMethod::SupOptimization:
      return "sup-optimization";
  }
  return "unknown";
}

std::vector<AxisGrid> quadrature_axes(const GaussianMixture& m,
                                      const QuadratureSpec& spec) {
  const int n = m.dim();
  if (n > 2) {
    throw UnsupportedDimension(
        "tensor-product quadrature supports dimension <= 2, got " +
        std::to_string(n));
  }
  int count = spec.points_per_axis;
  if (count < 3) {
    throw Error("quadrature needs at least 3 points per axis");
  }
  if (count % 2 == 0) {
    ++count;  // odd count keeps the half-resolution subgrid aligned
  }
  const double pad = spec.padding_sigmas * std::sqrt(m.max_eigenvalue());
  std::vector<AxisGrid> axes(n);
  for (int a = 0; a < n; ++a) {
    const double lo = m.centers().col(a).minCoeff() - pad;
    const double hi = m.centers().col(a).maxCoeff() + pad;
    axes[a] = AxisGrid{lo, (hi - lo) / (count - 1), count};
  }
  return axes;
}

Eigen::VectorXd density_on_grid(const GaussianMixture& m,
                                const std::vector<AxisGrid>& axes) {
  const int n = m.dim();
  if (static_cast<int>(axes.size()) != n) {
    throw DimensionMismatch("grid has " + std::to_string(axes.size()) +
                            " axes for dimension " + std::to_string(n));
  }
  const int k = m.components();
  const Eigen::MatrixXd& centers = m.centers();
  const Eigen::VectorXd& w = m.weights();
  if (n == 1) {
    const AxisGrid& ax = axes[0];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(ax.count);
    const double s = m.covariance()(0, 0);
    const double inv2s = 0.5 / s;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * s);
    for_chunks(ax.count, 4096, [&](std::size_t, std::size_t begin,
                                   std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double x = ax.at(static_cast<int>(i));
        double f = 0.0;
        for (int c = 0; c < k; ++c) {
          const double d = x - centers(c, 0);
          f += w[c] * std::exp(-d * d * inv2s);
        }
        out[static_cast<Eigen::Index>(i)] = f * norm;
      }
    });
    return out;
  }
  const AxisGrid& ax0 = axes[0];
  const AxisGrid& ax1 = axes[1];
  const Eigen::Index g0 = ax0.count;
  const Eigen::Index g1 = ax1.count;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g0 * g1);
  if (m.is_isotropic()) {
    const double s = m.isotropic_variance();
    const double inv2s = 0.5 / s;
    const double norm = 1.0 / (2.0 * std::numbers::pi * s);
    // Separable components: one 1D exponential array per axis per component.
    Eigen::MatrixXd ex(g0, k);
    Eigen::MatrixXd ey(g1, k);
    for (int c = 0; c < k; ++c) {
      for (Eigen::Index i = 0; i < g0; ++i) {
        const double d = ax0.at(static_cast<int>(i)) - centers(c, 0);
        ex(i, c) = std::exp(-d * d * inv2s);
      }
      for (Eigen::Index j = 0; j < g1; ++j) {
        const double d = ax1.at(static_cast<int>(j)) - centers(c, 1);
        ey(j, c) = std::exp(-d * d * inv2s);
      }
    }
    for_chunks(static_cast<std::size_t>(g0), 64, [&](std::size_t, std::size_t begin,
                                                     std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double* row = out.data() + static_cast<Eigen::Index>(i) * g1;
        for (int c = 0; c < k; ++c) {
          const double scale = w[c] * norm * ex(static_cast<Eigen::Index>(i), c);
          if (scale == 0.0) {
            continue;
          }
          const double* eyc = ey.col(c).data();
          for (Eigen::Index j = 0; j < g1; ++j) {
            row[j] += scale * eyc[j];
          }
        }
      }
    });
    return out;
  }
  const Eigen::MatrixXd& inv = m.covariance_inverse();
  const double a = inv(0, 0);
  const double b = inv(0, 1);
  const double cc = inv(1, 1);
  const double norm = std::exp(-m.log_normalizer());
  for_chunks(static_cast<std::size_t>(g0), 16, [&](std::size_t, std::size_t begin,
                                                   std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x0 = ax0.at(static_cast<int>(i));
      double* row = out.data() + static_cast<Eigen::Index>(i) * g1;
      for (int c = 0; c < k; ++c) {
        if (w[c] == 0.0) {
          continue;
        }
        const double dx = x0 - centers(c, 0);
        const double base = a * dx * dx;
        const double scale = w[c] * norm;
        for (Eigen::Index j = 0; j < g1; ++j) {
          const double dy = ax1.at(static_cast<int>(j)) - centers(c, 1);
          row[j] += scale * std::exp(-0.5 * (base + 2.0 * b * dx * dy +
                                             cc * dy * dy));
        }
      }
    }
  });
  return out;
}

EntropyEstimate renyi_exact_integer(const GaussianMixture& m, int alpha,
                                    double term_budget) {
  if (alpha < 2) {
    throw NonPositiveAlpha(
        "the closed form applies to integer orders >= 2, got " +
        std::to_string(alpha));
  }
  const int k = m.components();
  const int n = m.dim();
  const double terms = std::pow(static_cast<double>(k), alpha);
  if (terms > term_budget) {
    throw BudgetExceeded("k^alpha = " + fmt(terms) + " exceeds the budget of " +
                         fmt(term_budget) + " closed-form terms");
  }
  const Eigen::MatrixXd& inv = m.covariance_inverse();
  // P(i,j) = c_i' Σ⁻¹ c_j and q_i = P(i,i) turn each tuple's exponent into
  // running sums over the tuple.
  const Eigen::MatrixXd P = m.centers() * inv * m.centers().transpose();
  const Eigen::VectorXd logw = m.weights().array().log();
  // ∫ Π_j N(x; c_j, Σ) dx = (2π)^{n(1-α)/2} |Σ|^{(1-α)/2} α^{-n/2} e^{-Q/2}
  // with Q = Σ_j q_j − (1/α)·S'Σ⁻¹S, S = Σ_j c_j.
  const double alpha_d = static_cast<double>(alpha);
  const double log_g0 = -(alpha_d - 1.0) * 0.5 *
                            (n * kLog2Pi + m.log_det_covariance()) -
                        0.5 * n * std::log(alpha_d);
  std::vector<int> idx(alpha, 0);
  LogSumExp lse;
  for (;;) {
    double lw = 0.0;
    double qsum = 0.0;
    double cross = 0.0;
    for (int a = 0; a < alpha; ++a) {
      lw += logw[idx[a]];
      qsum += P(idx[a], idx[a]);
      for (int b = 0; b < alpha; ++b) {
        cross += P(idx[a], idx[b]);
      }
    }
    if (lw != -kInf) {
      const double q = qsum - cross / alpha_d;
      lse.add(lw + log_g0 - 0.5 * q);
    }
    int pos = alpha - 1;
    while (pos >= 0 && idx[pos] == k - 1) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++idx[pos];
  }
  EntropyEstimate est;
  est.order = alpha_d;
  est.value = lse.value() / (1.0 - alpha_d);
  est.std_err = 0.0;
  est.method = EntropyMethod::ExactInteger;
  est.metadata = "terms=" + fmt(terms);
  return est;
}

namespace {

// One integral ∫ φ_α(f) over the stored grid values, full or half resolution.
// stride=2 reuses every other node with doubled trapezoid steps.
double grid_integral(const Eigen::VectorXd& f, const std::vector<AxisGrid>& axes,
                     double alpha, int stride) {
  const auto sub_weight = [stride](const AxisGrid& ax, int i) {
    const int count = (ax.count - 1) / stride + 1;
    const double step = ax.step * stride;
    return (i == 0 || i == count - 1) ? 0.5 * step : step;
  };
  const auto integrand = [alpha](double v) {
    if (alpha == 1.0) {
      return v > 0.0 ? -v * std::log(v) : 0.0;
    }
    return pow_order(v, alpha);
  };
  if (axes.size() == 1) {
    const AxisGrid& ax = axes[0];
    const int count = (ax.count - 1) / stride + 1;
    return sum_terms(static_cast<std::size_t>(count), [&](std::size_t i) {
      const int gi = static_cast<int>(i) * stride;
      return sub_weight(ax, static_cast<int>(i)) * integrand(f[gi]);
    });
  }
  const AxisGrid& ax0 = axes[0];
  const AxisGrid& ax1 = axes[1];
  const int c0 = (ax0.count - 1) / stride + 1;
  const int c1 = (ax1.count - 1) / stride + 1;
  return sum_terms(static_cast<std::size_t>(c0) * c1, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / c1);
    const int j = static_cast<int>(idx % c1);
    const Eigen::Index gi = static_cast<Eigen::Index>(i) * stride * ax1.count +
                            static_cast<Eigen::Index>(j) * stride;
    return sub_weight(ax0, i) * sub_weight(ax1, j) * integrand(f[gi]);
  });
}

double integral_to_entropy(double integral, double alpha) {
  if (alpha == 1.0) {
    return integral;
  }
  return std::log(integral) / (1.0 - alpha);
}

std::string grid_label(const std::vector<AxisGrid>& axes,
                       const QuadratureSpec& spec) {
  std::string label = "grid=";
  for (std::size_t a = 0; a < axes.size(); ++a) {
    label += (a ? "x" : "") + std::to_string(axes[a].count);
  }
  label += " pad=" + fmt(spec.padding_sigmas);
  return label;
}

}  // namespace

std::vector<EntropyEstimate> renyi_quadrature_multi(
    const GaussianMixture& m, const std::vector<double>& orders,
    const QuadratureSpec& spec) {
  for (const double alpha : orders) {
    if (!(alpha > 0.0) || std::isinf(alpha)) {
      throw NonPositiveAlpha("quadrature needs a finite order > 0, got " +
                             fmt(alpha));
    }
  }
  const std::vector<AxisGrid> axes = quadrature_axes(m, spec);
  const Eigen::VectorXd f = density_on_grid(m, axes);
  std::vector<EntropyEstimate> out;
  out.reserve(orders.size());
  for (const double alpha : orders) {
    const double full = grid_integral(f, axes, alpha, 1);
    const double half = grid_integral(f, axes, alpha, 2);
    EntropyEstimate est;
    est.order = alpha;
    est.value = integral_to_entropy(full, alpha);
    est.std_err = 0.0;
    est.method = EntropyMethod::Quadrature;
    est.metadata = grid_label(axes, spec) + " halfgrid_delta=" +
                   fmt(std::abs(est.value - integral_to_entropy(half, alpha)));
    out.push_back(est);
  }
  return out;
}

EntropyEstimate renyi_quadrature(const GaussianMixture& m, double alpha,
                                 const QuadratureSpec& spec) {
  return renyi_quadrature_multi(m, {alpha}, spec)[0];
}

EntropyEstimate renyi_monte_carlo(const GaussianMixture& m, double alpha,
                                  std::int64_t samples, std::uint64_t seed) {
  if (!(alpha > 0.0) || std::isinf(alpha)) {
    throw NonPositiveAlpha("Monte Carlo needs a finite order > 0, got " +
                           fmt(alpha));
  }
  if (samples < 1000) {
    throw Error("Monte Carlo needs at least 1000 samples, got " +
                std::to_string(samples));
  }
  const std::size_t n_samples = static_cast<std::size_t>(samples);
  std::vector<double> logf(n_samples);
  for_chunks(n_samples, 4096, [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      logf[j] = m.log_density(m.sample(seed, j));
    }
  });
  EntropyEstimate est;
  est.order = alpha;
  est.method = EntropyMethod::MonteCarlo;
  est.seed = seed;
  const double n_d = static_cast<double>(n_samples);
  if (alpha == 1.0) {
    Accumulator mean_acc;
    for (const double v : logf) {
      mean_acc.add(v);
    }
    const double mean = mean_acc.total() / n_d;
    Accumulator var_acc;
    for (const double v : logf) {
      var_acc.add((v - mean) * (v - mean));
    }
    est.value = -mean;
    est.std_err = std::sqrt(var_acc.total() / (n_d - 1.0) / n_d);
    est.metadata = "N=" + std::to_string(samples);
    return est;
  }
  // y_j = (α−1)·log f; the estimate is log-mean-exp(y)/(1−α).  Standard
  // error via the delta method on the log-mean, cross-checked by jackknife.
  const double am1 = alpha - 1.0;
  LogSumExp lse1;
  LogSumExp lse2;
  for (const double v : logf) {
    lse1.add(am1 * v);
    lse2.add(2.0 * am1 * v);
  }
  const double log_sum = lse1.value();
  const double log_mean = log_sum - std::log(n_d);
  const double log_mean_sq = lse2.value() - std::log(n_d);
  const double rel_var = std::max(0.0, std::exp(log_mean_sq - 2.0 * log_mean) - 1.0);
  const double se_delta = std::sqrt(rel_var / n_d);
  Accumulator jack_sum;
  std::vector<double> loo(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double d = std::min(am1 * logf[j] - log_sum, -1e-12);
    loo[j] = log_sum + std::log1p(-std::exp(d)) - std::log(n_d - 1.0);
    jack_sum.add(loo[j]);
  }
  const double loo_mean = jack_sum.total() / n_d;
  Accumulator jack_var;
  for (const double v : loo) {
    jack_var.add((v - loo_mean) * (v - loo_mean));
  }
  const double se_jack = std::sqrt((n_d - 1.0) / n_d * jack_var.total());
  est.value = log_mean / (1.0 - alpha);
  est.std_err = std::max(se_delta, se_jack) / std::abs(1.0 - alpha);
  est.metadata = "N=" + std::to_string(samples) + " se_delta=" +
                 fmt(se_delta / std::abs(1.0 - alpha)) + " se_jackknife=" +
                 fmt(se_jack / std::abs(1.0 - alpha));
  return est;
}

EntropyEstimate renyi_sup(const GaussianMixture& m) {
  const int k = m.components();
  const int n = m.dim();
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(k) * (k + 1) / 2);
  for (int i = 0; i < k; ++i) {
    starts.push_back(m.centers().row(i).transpose());
    for (int j = i + 1; j < k; ++j) {
      starts.push_back(
          0.5 * (m.centers().row(i) + m.centers().row(j)).transpose());
    }
  }
  double best = -kInf;
  Eigen::VectorXd argmax = Eigen::VectorXd::Zero(n);
  for (Eigen::VectorXd x : starts) {
    // Mean-shift ascent: with a shared covariance the stationarity condition
    // is x = Σ p_i(x)·c_i, and each step does not decrease the density.
    for (int iter = 0; iter < 500; ++iter) {
      Eigen::VectorXd logp(k);
      for (int i = 0; i < k; ++i) {
        double q = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            q += (x[a] - m.centers()(i, a)) * m.covariance_inverse()(a, b) *
                 (x[b] - m.centers()(i, b));
          }
        }
        logp[i] = (m.weights()[i] > 0.0)
                      ? std::log(m.weights()[i]) - 0.5 * q
                      : -kInf;
      }
      const double shift = logp.maxCoeff();
      Eigen::VectorXd p = (logp.array() - shift).exp();
      p /= p.sum();
      Eigen::VectorXd next = m.centers().transpose() * p;
      const double move = (next - x).norm();
      x = next;
      if (move < 1e-13) {
        break;
      }
    }
    const double lf = m.log_density(x);
    if (lf > best) {
      best = lf;
      argmax = x;
    }
  }
  EntropyEstimate est;
  est.order = kInf;
  est.value = -best;
  est.std_err = 0.0;
  est.method = EntropyMethod::SupOptimization;
  std::string loc = "argmax=(";
  for (int a = 0; a < n; ++a) {
    loc += (a ? "," : "") + fmt(argmax[a]);
  }
  est.metadata = loc + ") starts=" + std::to_string(starts.size());
  return est;
}

EntropyEstimate estimate_entropy(const GaussianMixture& m, double alpha,
                                 const EstimatorPolicy& policy) {
  if (alpha < 0.0 || std::isnan(alpha)) {
    throw NonPositiveAlpha("entropy order must be nonnegative, got " +
                           fmt(alpha));
  }
  if (alpha == 0.0) {
    // The mixture has full-dimensional support, so the order-0 entropy is
    // the log-volume of R^n.
    EntropyEstimate est;
    est.order = 0.0;
    est.value = kInf;
    est.std_err = 0.0;
    est.method = EntropyMethod::ExactInteger;
    est.metadata = "full-dimensional support";
    return est;
  }
  if (std::isinf(alpha)) {
    return renyi_sup(m);
  }
  const bool integer_order =
      alpha >= 2.0 && alpha <= 64.0 && alpha == std::floor(alpha);
  switch (policy.kind) {
    case PolicyKind::Auto:
      if (integer_order &&
          std::pow(static_cast<double>(m.components()), alpha) <=
              policy.exact_term_budget) {
        return renyi_exact_integer(m, static_cast<int>(alpha),
                                   policy.exact_term_budget);
      }
      if (m.dim() <= 2) {
        return renyi_quadrature(m, alpha, policy.grid);
      }
      return renyi_monte_carlo(m, alpha, policy.mc_samples, policy.seed);
    case PolicyKind::Quadrature:
      return renyi_quadrature(m, alpha, policy.grid);
    case PolicyKind::MonteCarlo:
      return renyi_monte_carlo(m, alpha, policy.mc_samples, policy.seed);
  }
  throw Error("unreachable estimator policy");
}

double entropy_power(const GaussianMixture& m, const EstimatorPolicy& policy) {
  const EntropyEstimate h = estimate_entropy(m, 1.0, policy);
  return std::exp(2.0 * h.value / static_cast<double>(m.dim()));
}

}  // namespace kplab
