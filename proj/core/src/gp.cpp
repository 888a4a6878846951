#include "safegp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "safegp/errors.hpp"
#include "safegp/normal.hpp"
#include "safegp/parallel.hpp"
#include "safegp/random.hpp"

namespace safegp {

Hyperparams Hyperparams::isotropic(Eigen::Index dim, double signal_variance, double lengthscale,
                                   double noise_variance) {
  Hyperparams theta;
  theta.signal_variance = signal_variance;
  theta.lengthscales = Eigen::VectorXd::Constant(dim, lengthscale);
  theta.noise_variance = noise_variance;
  return theta;
}

void Hyperparams::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw InputError("signal variance must be positive");
  }
  if (lengthscales.size() == 0) throw InputError("at least one lengthscale is required");
  if (!(lengthscales.array() > 0.0).all() || !lengthscales.allFinite()) {
    throw InputError("lengthscales must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InputError("noise variance must be non-negative");
  }
}

void Dataset::validate(Eigen::Index dim) const {
  if (inputs.rows() != outputs.size()) {
    throw InputError("dataset: input and output counts differ");
  }
  if (inputs.rows() > 0 && inputs.cols() != dim) {
    throw InputError("dataset: input dimension does not match the lengthscales");
  }
  if (!inputs.allFinite() || !outputs.allFinite()) {
    throw InputError("dataset: non-finite entries");
  }
}

double se_kernel(const Eigen::Ref<const Eigen::VectorXd>& x1,
                 const Eigen::Ref<const Eigen::VectorXd>& x2, const Hyperparams& theta) {
  if (x1.size() != theta.dim() || x2.size() != theta.dim()) {
    throw InputError("se_kernel: point dimension does not match the lengthscales");
  }
  const double r2 = ((x1 - x2).array() / theta.lengthscales.array()).square().sum();
  return theta.signal_variance * std::exp(-0.5 * r2);
}

Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Hyperparams& theta) {
  if ((a.rows() > 0 && a.cols() != theta.dim()) || (b.rows() > 0 && b.cols() != theta.dim())) {
    throw InputError("se_kernel_matrix: point dimension does not match the lengthscales");
  }
  const Eigen::RowVectorXd inv_l = theta.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd as = a.array().rowwise() * inv_l.array();
  const Eigen::MatrixXd bs = b.array().rowwise() * inv_l.array();
  const Eigen::VectorXd a2 = as.rowwise().squaredNorm();
  const Eigen::RowVectorXd b2 = bs.rowwise().squaredNorm().transpose();
  Eigen::MatrixXd k = -2.0 * as * bs.transpose();
  k.colwise() += a2;
  k.rowwise() += b2;
  return theta.signal_variance * (-0.5 * k.array().max(0.0)).exp();
}

PsdFactor factorize_psd(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) throw InputError("factorize_psd: matrix is not square");
  if (n == 0) return {Eigen::MatrixXd(0, 0), 0.0};

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return {llt.matrixL(), 0.0};

  const double scale = cov.diagonal().mean();
  if (!(scale > 0.0)) {
    if (cov.cwiseAbs().maxCoeff() <= 1e-14) return {Eigen::MatrixXd::Zero(n, n), 0.0};
    throw NumericalError("factorize_psd: covariance has non-positive mean diagonal");
  }
  for (double rel = 1e-10; rel <= 1e-4 * 1.0000001; rel *= 10.0) {
    const double jitter = rel * scale;
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
  }
  throw NumericalError("factorize_psd: Cholesky failed at maximum jitter");
}

GPModel GPModel::fit(Hyperparams theta, Dataset data, double prior_mean) {
  theta.validate();
  data.validate(theta.dim());
  if (data.size() == 0) data.inputs.resize(0, theta.dim());

  GPModel model;
  model.theta_ = std::move(theta);
  model.data_ = std::move(data);
  model.prior_mean_ = prior_mean;

  Eigen::MatrixXd gram = se_kernel_matrix(model.data_.inputs, model.data_.inputs, model.theta_);
  gram.diagonal().array() += model.theta_.noise_variance;
  auto [lower, jitter] = factorize_psd(gram);
  model.factor_ = std::move(lower);
  model.jitter_ = jitter;
  model.refresh_weights();
  return model;
}

void GPModel::refresh_weights() {
  const Eigen::VectorXd centered = data_.outputs.array() - prior_mean_;
  weights_ = factor_.triangularView<Eigen::Lower>().solve(centered);
  factor_.transpose().triangularView<Eigen::Upper>().solveInPlace(weights_);
}

GPModel GPModel::with_observations(const Eigen::MatrixXd& inputs,
                                   const Eigen::VectorXd& outputs) const {
  Dataset extra{inputs, outputs};
  extra.validate(theta_.dim());
  if (extra.size() == 0) return *this;

  const Eigen::Index n0 = data_.size();
  const Eigen::Index n1 = n0 + extra.size();
  Dataset merged;
  merged.inputs.resize(n1, theta_.dim());
  merged.outputs.resize(n1);
  merged.inputs.topRows(n0) = data_.inputs;
  merged.inputs.bottomRows(extra.size()) = extra.inputs;
  merged.outputs.head(n0) = data_.outputs;
  merged.outputs.tail(extra.size()) = extra.outputs;

  GPModel next;
  next.theta_ = theta_;
  next.prior_mean_ = prior_mean_;
  next.jitter_ = jitter_;
  next.factor_ = Eigen::MatrixXd::Zero(n1, n1);
  next.factor_.topLeftCorner(n0, n0) = factor_;

  // Append one row of the factor per new point; fall back to a full refit if
  // the Schur complement is not safely positive.
  for (Eigen::Index i = n0; i < n1; ++i) {
    const Eigen::VectorXd x = merged.inputs.row(i).transpose();
    Eigen::VectorXd k(i);
    for (Eigen::Index j = 0; j < i; ++j) k(j) = se_kernel(merged.inputs.row(j).transpose(), x, theta_);
    const double diag = theta_.signal_variance + theta_.noise_variance + jitter_;
    Eigen::VectorXd l = k;
    if (i > 0) next.factor_.topLeftCorner(i, i).triangularView<Eigen::Lower>().solveInPlace(l);
    const double schur = diag - l.squaredNorm();
    if (!(schur > 1e-12 * diag)) return GPModel::fit(theta_, std::move(merged), prior_mean_);
    next.factor_.row(i).head(i) = l.transpose();
    next.factor_(i, i) = std::sqrt(schur);
  }
  next.data_ = std::move(merged);
  next.refresh_weights();
  return next;
}

double GPModel::mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != theta_.dim()) throw InputError("mean: point dimension mismatch");
  double mu = prior_mean_;
  for (Eigen::Index i = 0; i < data_.size(); ++i) {
    mu += weights_(i) * se_kernel(data_.inputs.row(i).transpose(), x, theta_);
  }
  return mu;
}

double GPModel::variance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != theta_.dim()) throw InputError("variance: point dimension mismatch");
  Eigen::VectorXd k(data_.size());
  for (Eigen::Index i = 0; i < data_.size(); ++i) {
    k(i) = se_kernel(data_.inputs.row(i).transpose(), x, theta_);
  }
  if (data_.size() > 0) factor_.triangularView<Eigen::Lower>().solveInPlace(k);
  return std::max(0.0, theta_.signal_variance - k.squaredNorm());
}

Eigen::VectorXd GPModel::mean_at(const Eigen::MatrixXd& points) const {
  if (points.rows() > 0 && points.cols() != theta_.dim()) {
    throw InputError("mean_at: point dimension mismatch");
  }
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(points.rows(), prior_mean_);
  if (data_.size() == 0) return mu;
  // Blocked so the cross-kernel matrix stays small for large grids.
  constexpr Eigen::Index kBlock = 1024;
  for (Eigen::Index begin = 0; begin < points.rows(); begin += kBlock) {
    const Eigen::Index len = std::min(kBlock, points.rows() - begin);
    const Eigen::MatrixXd cross = se_kernel_matrix(points.middleRows(begin, len), data_.inputs, theta_);
    mu.segment(begin, len).noalias() += cross * weights_;
  }
  return mu;
}

TrajectoryPosterior GPModel::posterior(const Eigen::MatrixXd& points) const {
  if (points.rows() < 1) throw InputError("posterior: at least one point is required");
  if (points.cols() != theta_.dim()) throw InputError("posterior: point dimension mismatch");

  TrajectoryPosterior tp;
  tp.points = points;
  tp.covariance = se_kernel_matrix(points, points, theta_);
  tp.mean = Eigen::VectorXd::Constant(points.rows(), prior_mean_);
  if (data_.size() > 0) {
    const Eigen::MatrixXd cross = se_kernel_matrix(data_.inputs, points, theta_);  // n x m
    tp.mean.noalias() += cross.transpose() * weights_;
    const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(cross);
    tp.covariance.noalias() -= v.transpose() * v;
  }
  tp.covariance = 0.5 * (tp.covariance + tp.covariance.transpose()).eval();
  return tp;
}

TrajectoryPosterior trajectory_posterior(const GPModel& model, const Eigen::MatrixXd& points) {
  return model.posterior(points);
}

Eigen::MatrixXd sample_trajectories(const TrajectoryPosterior& tp, std::size_t count,
                                    std::uint64_t seed) {
  if (count == 0) throw InputError("sample_trajectories: count must be positive");
  const Eigen::Index m = tp.size();
  const Eigen::MatrixXd lower = factorize_psd(tp.covariance).lower;

  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), m);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    Engine engine = make_engine(seed, "trajectory-samples", c);
    std::normal_distribution<double> normal;
    Eigen::VectorXd xi(m);
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    for (std::size_t row = begin; row < end; ++row) {
      for (Eigen::Index j = 0; j < m; ++j) xi(j) = normal(engine);
      out.row(static_cast<Eigen::Index>(row)) =
          (tp.mean + lower.triangularView<Eigen::Lower>() * xi).transpose();
    }
  });
  return out;
}

double pointwise_unsafe_prob(const GPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double mu = model.mean(x);
  const double var = model.variance(x);
  if (!(var > 0.0)) {
    if (mu == 0.0) throw InputError("pointwise_unsafe_prob: zero variance at a zero mean");
    return mu < 0.0 ? 1.0 : 0.0;
  }
  return normal_cdf(-mu / std::sqrt(var));
}

}  // namespace safegp
