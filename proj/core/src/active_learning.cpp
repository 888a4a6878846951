#include "safegp/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "safegp/centering.hpp"
#include "safegp/errors.hpp"
#include "safegp/random.hpp"

namespace safegp {

void SALConfig::validate() const {
  decider.validate();
  domain.validate();
  if (m < 1) throw InputError("SAL: m must be >= 1");
  if (candidate_count < 1) throw InputError("SAL: candidate_count must be >= 1");
  if (max_retries < 1) throw InputError("SAL: max_retries must be >= 1");
}

double penalty_unsafe(const Eigen::Ref<const Eigen::VectorXd>& mean) {
  return 0.5 + mean.cwiseMax(0.0).norm();
}

std::vector<Trajectory> generate_candidates(const Eigen::VectorXd& current, const Domain& domain,
                                            std::size_t count, int m, std::uint64_t seed) {
  domain.validate();
  if (!domain.contains(current)) throw InputError("generate_candidates: start lies outside the domain");
  Engine engine = make_engine(seed, "candidate-endpoints");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd end(domain.dim());
    for (Eigen::Index k = 0; k < domain.dim(); ++k) {
      end(k) = domain.lo(k) + unit(engine) * (domain.hi(k) - domain.lo(k));
    }
    out.push_back(Trajectory::ramp(current, end, m));
  }
  return out;
}

Acquisition acquire(const GPModel& model, const std::vector<Trajectory>& candidates,
                    const SALConfig& cfg, std::size_t remaining_budget, std::size_t iteration) {
  if (candidates.empty()) throw InputError("acquire: no candidates");
  Acquisition acq;
  acq.endpoint_sigma.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    acq.endpoint_sigma[i] = std::sqrt(model.variance(candidates[i].end));
  }
  acq.order.resize(candidates.size());
  std::iota(acq.order.begin(), acq.order.end(), std::size_t{0});
  std::stable_sort(acq.order.begin(), acq.order.end(), [&](std::size_t a, std::size_t b) {
    return acq.endpoint_sigma[a] > acq.endpoint_sigma[b];
  });

  for (const std::size_t idx : acq.order) {
    if (acq.samples >= remaining_budget) {
      acq.budget_exhausted = true;
      return acq;
    }
    const TrajectoryPosterior tp = model.posterior(candidates[idx].points);
    const SafetyVerdict verdict =
        decide(tp, cfg.decider, derive_seed(cfg.seed, "decider", iteration, idx));
    acq.verdicts.push_back(verdict);
    acq.samples += verdict.samples_used;
    if (verdict.reason == StopReason::MeanSignChange) {
      ++acq.sign_change_rejections;
      const double penalty = penalty_unsafe(tp.mean);
      acq.best_penalty = acq.best_penalty ? std::min(*acq.best_penalty, penalty) : penalty;
    }
    if (acq.samples > remaining_budget) {
      acq.budget_exhausted = true;
      return acq;
    }
    if (verdict.safe()) {
      acq.chosen = idx;
      return acq;
    }
  }
  return acq;
}

namespace {

// Caches k(grid, X) so each new observation costs one kernel column plus a
// matrix-vector product instead of a full grid evaluation.
class GridMetrics {
 public:
  GridMetrics(const Benchmark& bench, const GPModel& model) : grid_(make_eval_grid(bench)) {
    sync(model);
  }

  Metrics evaluate(const GPModel& model) {
    sync(model);
    const Eigen::Index n = model.data().size();
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(grid_.points.rows(), model.prior_mean());
    mu.noalias() += cross_.leftCols(n) * model.weights();
    Metrics out;
    out.rmse = std::sqrt((mu - grid_.truth).squaredNorm() / static_cast<double>(mu.size()));
    Eigen::Index agree = 0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if ((mu(i) >= 0.0) == (grid_.truth(i) >= 0.0)) ++agree;
    }
    out.health_coverage = static_cast<double>(agree) / static_cast<double>(mu.size());
    return out;
  }

 private:
  void sync(const GPModel& model) {
    const Eigen::Index n = model.data().size();
    if (n > cross_.cols()) {
      const Eigen::Index cap = std::max<Eigen::Index>(n, 2 * cross_.cols());
      cross_.conservativeResize(grid_.points.rows(), cap);
    }
    if (n > filled_) {
      cross_.middleCols(filled_, n - filled_) = se_kernel_matrix(
          grid_.points, model.data().inputs.middleRows(filled_, n - filled_), model.hyperparams());
      filled_ = n;
    }
  }

  EvalGrid grid_;
  Eigen::MatrixXd cross_;
  Eigen::Index filled_ = 0;
};

}  // namespace

SALResult run_sal(const Benchmark& bench, const SALConfig& cfg, const Dataset& initial_data) {
  cfg.validate();
  if (initial_data.size() == 0) throw InputError("run_sal: initial data must not be empty");
  SALResult result;
  if (cfg.total_sample_budget == 0) return result;

  GPModel model = GPModel::fit(bench.hyperparams, initial_data);
  Eigen::VectorXd current = initial_data.inputs.row(initial_data.size() - 1).transpose();
  GridMetrics metrics(bench, model);
  Metrics last = metrics.evaluate(model);

  int failures = 0;
  for (std::size_t iteration = 0;; ++iteration) {
    if (result.samples_used >= cfg.total_sample_budget) {
      result.budget_exhausted = true;
      break;
    }
    if (cfg.max_measurements > 0 && result.n_sal >= cfg.max_measurements) break;

    const auto candidates = generate_candidates(current, cfg.domain, cfg.candidate_count, cfg.m,
                                                derive_seed(cfg.seed, "candidates", iteration));
    Acquisition acq =
        acquire(model, candidates, cfg, cfg.total_sample_budget - result.samples_used, iteration);
    result.samples_used += acq.samples;

    ExperimentRecord rec;
    rec.iteration = iteration;
    rec.candidates_evaluated = acq.verdicts.size();
    rec.sign_change_rejections = acq.sign_change_rejections;
    rec.best_penalty = acq.best_penalty;
    rec.samples = acq.samples;
    rec.cumulative_samples = result.samples_used;
    if (!acq.verdicts.empty()) rec.verdict = acq.verdicts.back();

    if (acq.chosen) {
      const Trajectory& chosen = candidates[*acq.chosen];
      rec.measured = true;
      rec.trajectory = chosen;
      rec.acquisition_sigma = acq.endpoint_sigma[*acq.chosen];

      // The start of a ramp is the previous endpoint, already in the data.
      const Eigen::Index first = cfg.measure_mode == MeasureMode::EndpointOnly
                                     ? chosen.size() - 1
                                     : std::min<Eigen::Index>(1, chosen.size() - 1);
      const Eigen::MatrixXd xs = chosen.points.bottomRows(chosen.size() - first);
      Eigen::VectorXd ys(xs.rows());
      Engine noise_engine = make_engine(cfg.seed, "measurement-noise", iteration);
      std::normal_distribution<double> noise(0.0, 1.0);
      for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        const double truth = bench.ground_truth(xs.row(i).transpose());
        if (truth < 0.0) ++rec.unsafe_measurements;
        ys(i) = truth + bench.noise_std * noise(noise_engine);
      }
      model = model.with_observations(xs, ys);
      current = chosen.end;
      failures = 0;
      ++result.n_sal;
      result.n_f += rec.unsafe_measurements;
      last = metrics.evaluate(model);
    } else {
      ++failures;
    }
    rec.training_size = static_cast<std::size_t>(model.data().size());
    rec.rmse = last.rmse;
    rec.health_coverage = last.health_coverage;
    result.records.push_back(std::move(rec));

    if (acq.budget_exhausted) {
      result.budget_exhausted = true;
      break;
    }
    if (failures >= cfg.max_retries) break;
  }

  result.final_rmse = last.rmse;
  result.final_health_coverage = last.health_coverage;
  return result;
}

}  // namespace safegp
