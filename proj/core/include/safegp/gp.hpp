#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace safegp {

/// Squared-exponential kernel hyperparameters.
struct Hyperparams {
  double signal_variance = 1.0;   ///< sigma_f^2
  Eigen::VectorXd lengthscales;   ///< one per input dimension
  double noise_variance = 0.0;    ///< sigma_n^2

  /// Isotropic helper: the same lengthscale in every dimension.
  static Hyperparams isotropic(Eigen::Index dim, double signal_variance, double lengthscale,
                               double noise_variance);

  Eigen::Index dim() const { return lengthscales.size(); }

  /// Throws InputError unless sigma_f^2 > 0, every lengthscale > 0 and sigma_n^2 >= 0.
  void validate() const;
};

/// Training inputs (one row per point) and outputs.
struct Dataset {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd outputs;

  Eigen::Index size() const { return outputs.size(); }
  void validate(Eigen::Index dim) const;
};

/// Posterior of the GP restricted to a discretized trajectory.
struct TrajectoryPosterior {
  Eigen::MatrixXd points;       ///< m x d
  Eigen::VectorXd mean;         ///< m
  Eigen::MatrixXd covariance;   ///< m x m, symmetric PSD

  Eigen::Index size() const { return mean.size(); }
};

/// sigma_f^2 exp(-1/2 sum_d (x1_d - x2_d)^2 / l_d^2).
double se_kernel(const Eigen::Ref<const Eigen::VectorXd>& x1,
                 const Eigen::Ref<const Eigen::VectorXd>& x2, const Hyperparams& theta);

/// Kernel matrix between the rows of a and the rows of b.
Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Hyperparams& theta);

/// Lower Cholesky factor of a symmetric PSD matrix under the jitter schedule:
/// plain factorization first, then 1e-10 * mean(diag) added to the diagonal,
/// escalating by 10x up to 1e-4 * mean(diag). An all-zero matrix yields a zero
/// factor. Throws NumericalError when every attempt fails.
struct PsdFactor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};
PsdFactor factorize_psd(const Eigen::MatrixXd& cov);

/// Exact GP regression model with constant prior mean.
///
/// Immutable after construction. Conditioning on extra data returns a new
/// model whose Cholesky factor is extended row by row in O(n^2) per point.
class GPModel {
 public:
  static GPModel fit(Hyperparams theta, Dataset data, double prior_mean = 0.0);

  const Hyperparams& hyperparams() const { return theta_; }
  const Dataset& data() const { return data_; }
  double prior_mean() const { return prior_mean_; }
  /// Lower factor of K + sigma_n^2 I (+ jitter on the diagonal, if one was needed).
  const Eigen::MatrixXd& gram_factor() const { return factor_; }
  double jitter() const { return jitter_; }
  /// (K + sigma_n^2 I)^{-1} (y - prior_mean); posterior mean is prior_mean + k(x, X) . weights.
  const Eigen::VectorXd& weights() const { return weights_; }

  double mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Posterior means at each row of points.
  Eigen::VectorXd mean_at(const Eigen::MatrixXd& points) const;
  /// Joint posterior at the rows of points.
  TrajectoryPosterior posterior(const Eigen::MatrixXd& points) const;

  /// Model conditioned on data plus the given rows.
  GPModel with_observations(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs) const;

 private:
  GPModel() = default;
  void refresh_weights();

  Hyperparams theta_;
  Dataset data_;
  double prior_mean_ = 0.0;
  double jitter_ = 0.0;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd weights_;  // (K + sigma_n^2 I)^{-1} (y - prior_mean)
};

inline GPModel fit(Hyperparams theta, Dataset data, double prior_mean = 0.0) {
  return GPModel::fit(std::move(theta), std::move(data), prior_mean);
}

TrajectoryPosterior trajectory_posterior(const GPModel& model, const Eigen::MatrixXd& points);

/// count x m matrix of i.i.d. draws from N(mean, covariance).
///
/// The covariance is factorized once. Rows are produced in fixed-size chunks,
/// each with its own stream derived from (seed, chunk), so the output is
/// identical for any SAFEGP_THREADS value.
Eigen::MatrixXd sample_trajectories(const TrajectoryPosterior& tp, std::size_t count,
                                    std::uint64_t seed);

/// Posterior probability Phi(-mu/sigma) that the latent value at x is below 0.
double pointwise_unsafe_prob(const GPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Rows per independently seeded chunk in every sampler of the library.
inline constexpr std::size_t kSampleChunk = 4096;

}  // namespace safegp
