#include "kplab/capacity.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "kplab/parallel.hpp"
#include "kplab/rng.hpp"

namespace kplab {

namespace {

// Evaluates E_{x ~ N(c_i, sI)}[log q_w(x)] for every component, either on a
// fixed quadrature grid or on frozen noise draws.
class DivergenceEngine {
 public:
  DivergenceEngine(const PointConfiguration& alphabet, double s,
                   const QuadratureSpec& grid, std::int64_t mc_samples,
                   std::uint64_t seed)
      : points_(alphabet.points()),
        k_(alphabet.size()),
        n_(alphabet.dim()),
        s_(s) {
    const Eigen::VectorXd uniform =
        Eigen::VectorXd::Constant(k_, 1.0 / static_cast<double>(k_));
    if (n_ <= 2) {
      use_grid_ = true;
      const GaussianMixture shape =
          GaussianMixture::isotropic(points_, uniform, s_);
      axes_ = quadrature_axes(shape, grid);
      std::size_t total = 1;
      for (const AxisGrid& ax : axes_) {
        total *= static_cast<std::size_t>(ax.count);
      }
      node_weight_.resize(total);
      for (std::size_t g = 0; g < total; ++g) {
        if (axes_.size() == 1) {
          node_weight_[g] = axes_[0].weight(static_cast<int>(g));
        } else {
          const int i = static_cast<int>(g) / axes_[1].count;
          const int j = static_cast<int>(g) % axes_[1].count;
          node_weight_[g] = axes_[0].weight(i) * axes_[1].weight(j);
        }
      }
      component_density_.resize(k_);
      for (int i = 0; i < k_; ++i) {
        const GaussianMixture single = GaussianMixture::isotropic(
            points_.row(i), Eigen::VectorXd::Ones(1), s_);
        component_density_[i] = density_on_grid(single, axes_);
      }
    } else {
      use_grid_ = false;
      const CounterRng rng(derive_seed(seed, "capacity-noise", 0));
      noise_.resize(static_cast<Eigen::Index>(mc_samples), n_);
      for (Eigen::Index j = 0; j < noise_.rows(); ++j) {
        for (int a = 0; a < n_; ++a) {
          noise_(j, a) = std::sqrt(s_) *
                         rng.normal(static_cast<std::uint64_t>(j),
                                    static_cast<std::uint64_t>(a));
        }
      }
    }
  }

  // D_i = −(n/2)·log(2πes) − E_i[log q_w]; returns all D_i.
  Eigen::VectorXd divergences(const Eigen::VectorXd& w) const {
    const double h_component =
        0.5 * n_ * std::log(2.0 * std::numbers::pi * std::numbers::e * s_);
    Eigen::VectorXd d(k_);
    if (use_grid_) {
      const std::size_t total = node_weight_.size();
      Eigen::VectorXd log_q(total);
      for (std::size_t g = 0; g < total; ++g) {
        double q = 0.0;
        for (int i = 0; i < k_; ++i) {
          q += w[i] * component_density_[i][static_cast<Eigen::Index>(g)];
        }
        log_q[static_cast<Eigen::Index>(g)] = q > 0.0 ? std::log(q) : -746.0;
      }
      for (int i = 0; i < k_; ++i) {
        const Eigen::VectorXd& p = component_density_[i];
        const double cross = sum_terms(total, [&](std::size_t g) {
          const double pi = p[static_cast<Eigen::Index>(g)];
          return pi > 0.0 ? node_weight_[g] * pi *
                                log_q[static_cast<Eigen::Index>(g)]
                          : 0.0;
        });
        d[i] = -h_component - cross;
      }
      return d;
    }
    const GaussianMixture mix = GaussianMixture::isotropic(points_, w, s_);
    const double n_samples = static_cast<double>(noise_.rows());
    for (int i = 0; i < k_; ++i) {
      const double mean = sum_terms(
          static_cast<std::size_t>(noise_.rows()), [&](std::size_t j) {
            const Eigen::VectorXd x =
                points_.row(i).transpose() +
                noise_.row(static_cast<Eigen::Index>(j)).transpose();
            return mix.log_density(x);
          });
      d[i] = -h_component - mean / n_samples;
    }
    return d;
  }

 private:
  Eigen::MatrixXd points_;
  int k_;
  int n_;
  double s_;
  bool use_grid_ = false;
  std::vector<AxisGrid> axes_;
  std::vector<double> node_weight_;
  std::vector<Eigen::VectorXd> component_density_;
  Eigen::MatrixXd noise_;
};

}  // namespace

CapacityResult blahut_arimoto(const PointConfiguration& alphabet, double s,
                              double tol, int max_iter,
                              const QuadratureSpec& grid,
                              std::int64_t mc_samples, std::uint64_t seed) {
  if (!(s > 0.0)) {
    throw Error("noise variance must be positive, got " + std::to_string(s));
  }
  if (!(tol > 0.0)) {
    throw Error("tolerance must be positive, got " + std::to_string(tol));
  }
  const int k = alphabet.size();
  CapacityResult result;
  result.noise = s;
  if (k == 1) {
    result.weights = Eigen::VectorXd::Ones(1);
    result.capacity = result.lower = result.upper = 0.0;
    result.history.push_back({0, 0.0, 0.0});
    result.converged = true;
    return result;
  }
  const DivergenceEngine engine(alphabet, s, grid, mc_samples, seed);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / k);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd d = engine.divergences(w);
    const double mutual = w.dot(d);
    const double upper = d.maxCoeff();
    result.history.push_back({iter, mutual, upper - mutual});
    result.weights = w;
    result.capacity = result.lower = mutual;
    result.upper = upper;
    if (upper - mutual < tol) {
      result.converged = true;
      return result;
    }
    // Multiplicative update, shifted for stability.
    Eigen::VectorXd next = w.array() * (d.array() - upper).exp();
    w = next / next.sum();
  }
  return result;  // converged stays false: best bracket so far is reported
}

double channel_mutual_information(const PointConfiguration& alphabet,
                                  const Eigen::VectorXd& input_weights,
                                  double s, const EstimatorPolicy& policy) {
  const GaussianMixture m =
      GaussianMixture::isotropic(alphabet.points(), input_weights, s);
  const EntropyEstimate h = estimate_entropy(m, 1.0, policy);
  const double h_noise =
      0.5 * alphabet.dim() *
      std::log(2.0 * std::numbers::pi * std::numbers::e * s);
  return h.value - h_noise;
}

CapacityComparison capacity_contraction_check(const ContractionPair& pair,
                                              double s, double tol,
                                              const QuadratureSpec& grid,
                                              std::int64_t mc_samples,
                                              std::uint64_t seed) {
  const int common_dim = std::max(pair.source().dim(), pair.target().dim());
  const PointConfiguration source = pair.source().padded_to(common_dim);
  const PointConfiguration target = pair.target().padded_to(common_dim);
  CapacityComparison cmp;
  cmp.source = blahut_arimoto(source, s, tol, 500, grid, mc_samples,
                              derive_seed(seed, "capacity-source", 0));
  cmp.target = blahut_arimoto(target, s, tol, 500, grid, mc_samples,
                              derive_seed(seed, "capacity-target", 0));
  cmp.gap = cmp.source.capacity - cmp.target.capacity;
  // Pushing the target-optimal law back onto the source alphabet is
  // index-aligned: letters the contraction merged keep their own indices,
  // so their pushed-back weights add up inside the mixture.
  EstimatorPolicy policy;
  policy.kind = common_dim <= 2 ? PolicyKind::Quadrature : PolicyKind::MonteCarlo;
  policy.grid = grid;
  policy.mc_samples = std::max<std::int64_t>(mc_samples, 1000);
  policy.seed = derive_seed(seed, "capacity-pointwise", 0);
  cmp.i_source_at_target_weights =
      channel_mutual_information(source, cmp.target.weights, s, policy);
  cmp.i_target_at_target_weights =
      channel_mutual_information(target, cmp.target.weights, s, policy);
  cmp.pointwise_ok = cmp.i_source_at_target_weights >=
                     cmp.i_target_at_target_weights - tol;
  const double source_bracket = cmp.source.upper - cmp.source.lower;
  const double target_bracket = cmp.target.upper - cmp.target.lower;
  if (cmp.gap >= 0.0) {
    cmp.verdict = Verdict::Holds;
  } else if (cmp.gap >= -(source_bracket + target_bracket + 1e-6)) {
    cmp.verdict = Verdict::HoldsWithinNoise;
  } else {
    cmp.verdict = Verdict::Violation;
  }
  return cmp;
}

}  // namespace kplab
