#include "safegp/centering.hpp"

#include <algorithm>
#include <cmath>

#include "safegp/errors.hpp"
#include "safegp/parallel.hpp"
#include "safegp/random.hpp"

namespace safegp {

std::optional<CenteredProcess> center(const TrajectoryPosterior& tp) {
  if (tp.size() < 1) throw InputError("center: empty trajectory");
  if (!(tp.mean.array() > 0.0).all()) return std::nullopt;

  CenteredProcess process;
  process.mean = tp.mean;
  const Eigen::VectorXd inv = tp.mean.cwiseInverse();
  process.centered_cov = inv.asDiagonal() * tp.covariance * inv.asDiagonal();
  process.sigma_tilde = std::sqrt(std::max(0.0, process.centered_cov.diagonal().maxCoeff()));
  return process;
}

namespace {

template <typename Fill>
void chunked(std::span<double> out, Fill&& fill) {
  const std::size_t chunks = (out.size() + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk;
    const std::size_t len = std::min(out.size() - begin, kSampleChunk);
    fill(c, out.subspan(begin, len));
  });
}

}  // namespace

GaussianMaximaStream::GaussianMaximaStream(const CenteredProcess& process, std::uint64_t seed)
    : factor_(factorize_psd(process.centered_cov).lower), seed_(seed) {}

void GaussianMaximaStream::draw(int round, std::span<double> out) {
  const Eigen::Index m = factor_.rows();
  chunked(out, [&](std::size_t chunk, std::span<double> dst) {
    Engine engine = make_engine(seed_, "centered-maxima", static_cast<std::uint64_t>(round), chunk);
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(dst.size());
    Eigen::MatrixXd xi(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) xi(j, i) = normal(engine);
    }
    // X = (mu - Z) / mu = -(L xi) with L the factor of the centered covariance.
    const Eigen::MatrixXd x = factor_.triangularView<Eigen::Lower>() * xi;
    for (Eigen::Index i = 0; i < n; ++i) dst[static_cast<std::size_t>(i)] = -x.col(i).minCoeff();
  });
}

BernoulliMaximaStream::BernoulliMaximaStream(double p, std::uint64_t seed) : p_(p), seed_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("BernoulliMaximaStream: p must lie in [0, 1]");
}

void BernoulliMaximaStream::draw(int round, std::span<double> out) {
  chunked(out, [&](std::size_t chunk, std::span<double> dst) {
    Engine engine = make_engine(seed_, "bernoulli-maxima", static_cast<std::uint64_t>(round), chunk);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (double& s : dst) s = uniform(engine) < p_ ? 2.0 : 0.0;
  });
}

std::vector<double> sample_maxima(const CenteredProcess& process, std::size_t count,
                                  std::uint64_t seed) {
  std::vector<double> out(count);
  GaussianMaximaStream stream(process, seed);
  stream.draw(1, out);
  return out;
}

}  // namespace safegp
