#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "safegp/benchmarks.hpp"
#include "safegp/deciders.hpp"
#include "safegp/gp.hpp"
#include "safegp/trajectory.hpp"

namespace safegp {

struct SALConfig {
  DeciderConfig decider;
  Domain domain;
  int m = 5;                              ///< points per trajectory
  std::size_t candidate_count = 20;       ///< random ramps screened per iteration
  std::size_t total_sample_budget = 5'000'000;  ///< trajectory draws over the whole run
  MeasureMode measure_mode = MeasureMode::EndpointOnly;
  std::uint64_t seed = 0;
  int max_retries = 10;                   ///< consecutive iterations without a safe candidate
  std::size_t max_measurements = 0;       ///< 0: unlimited

  void validate() const;
};

struct ExperimentRecord {
  std::size_t iteration = 0;
  bool measured = false;
  std::optional<Trajectory> trajectory;   ///< chosen ramp, if any candidate was safe
  std::optional<SafetyVerdict> verdict;   ///< verdict of the chosen (or last screened) candidate
  double acquisition_sigma = 0.0;         ///< predictive std at the chosen endpoint
  std::size_t candidates_evaluated = 0;
  std::size_t sign_change_rejections = 0;
  std::optional<double> best_penalty;     ///< smallest penalty among sign-change rejections
  std::size_t samples = 0;                ///< draws spent in this iteration
  std::size_t cumulative_samples = 0;
  std::size_t training_size = 0;
  std::size_t unsafe_measurements = 0;    ///< measured points with ground truth < 0
  double rmse = 0.0;
  double health_coverage = 0.0;
};

struct SALResult {
  std::vector<ExperimentRecord> records;
  std::size_t n_sal = 0;          ///< successful measurement iterations
  std::size_t n_f = 0;            ///< measured points that are unsafe under the ground truth
  std::size_t samples_used = 0;
  double final_rmse = 0.0;
  double final_health_coverage = 0.0;
  bool budget_exhausted = false;
};

/// 0.5 + || max(mu, 0) ||_2, the rejection value logged for trajectories whose
/// mean changes sign.
double penalty_unsafe(const Eigen::Ref<const Eigen::VectorXd>& mean);

/// count ramps from current to endpoints drawn uniformly in the domain.
std::vector<Trajectory> generate_candidates(const Eigen::VectorXd& current, const Domain& domain,
                                            std::size_t count, int m, std::uint64_t seed);

struct Acquisition {
  std::optional<std::size_t> chosen;       ///< index into the candidate list
  std::vector<std::size_t> order;          ///< evaluation order (descending endpoint std)
  std::vector<SafetyVerdict> verdicts;     ///< one per evaluated candidate, in order
  std::vector<double> endpoint_sigma;      ///< per candidate
  std::size_t samples = 0;
  std::size_t sign_change_rejections = 0;
  std::optional<double> best_penalty;
  bool budget_exhausted = false;
};

/// Screens candidates by descending endpoint predictive std and returns the
/// first one judged Safe.
///
/// Every verdict is charged against remaining_budget; if a decision would
/// overrun it, the scan stops with budget_exhausted set and no candidate.
/// Candidate i of iteration k is decided with a seed derived from
/// (cfg.seed, k, i).
Acquisition acquire(const GPModel& model, const std::vector<Trajectory>& candidates,
                    const SALConfig& cfg, std::size_t remaining_budget, std::size_t iteration);

/// Safe active-learning loop on a benchmark's ground truth.
///
/// Each iteration: generate ramps from the last measured endpoint, acquire,
/// measure (endpoint, or all points after the start), condition the model,
/// log metrics. Stops when the sample budget runs out, after max_retries
/// consecutive iterations without a safe candidate, or at max_measurements.
SALResult run_sal(const Benchmark& bench, const SALConfig& cfg, const Dataset& initial_data);

}  // namespace safegp
