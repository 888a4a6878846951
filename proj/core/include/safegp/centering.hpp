#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "safegp/gp.hpp"

namespace safegp {

/// Zero-mean process X_j = (mu_j - Z_j) / mu_j of a positive-mean trajectory.
///
/// The trajectory dips to or below zero exactly when max_j X_j >= 1.
struct CenteredProcess {
  Eigen::VectorXd mean;            ///< mu of the original posterior, all entries > 0
  Eigen::MatrixXd centered_cov;    ///< C_ij = Sigma_ij / (mu_i mu_j)
  double sigma_tilde = 0.0;        ///< max_j sqrt(C_jj)

  Eigen::Index size() const { return mean.size(); }
};

/// Returns nullopt when some mu_j <= 0 (mean sign change: P* >= 1/2).
std::optional<CenteredProcess> center(const TrajectoryPosterior& tp);

/// Source of simulated maxima S_i = max_j X_{j,i}.
///
/// Round r supplies the M_r - M_{r-1} fresh draws of that round; deciders
/// keep everything drawn in earlier rounds.
class MaximaStream {
 public:
  virtual ~MaximaStream() = default;
  virtual void draw(int round, std::span<double> out) = 0;
};

/// Maxima of a centered Gaussian process.
///
/// Draws for (round, chunk) come from a stream derived from (seed, round,
/// chunk), so two deciders given the same seed see the same samples, and the
/// values never depend on the thread count.
class GaussianMaximaStream final : public MaximaStream {
 public:
  GaussianMaximaStream(const CenteredProcess& process, std::uint64_t seed);
  void draw(int round, std::span<double> out) override;

 private:
  Eigen::MatrixXd factor_;  // lower factor of the centered covariance
  std::uint64_t seed_;
};

/// Synthetic stream whose maxima exceed 1 with probability p.
///
/// Emits 2.0 with probability p and 0.0 otherwise; used to calibrate the
/// Monte-Carlo deciders against a known P*.
class BernoulliMaximaStream final : public MaximaStream {
 public:
  BernoulliMaximaStream(double p, std::uint64_t seed);
  void draw(int round, std::span<double> out) override;

 private:
  double p_;
  std::uint64_t seed_;
};

/// count draws of max_j X_j from the centered process.
std::vector<double> sample_maxima(const CenteredProcess& process, std::size_t count,
                                  std::uint64_t seed);

}  // namespace safegp
