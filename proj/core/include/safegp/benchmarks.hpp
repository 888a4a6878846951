#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "safegp/gp.hpp"
#include "safegp/trajectory.hpp"

namespace safegp {

enum class MeasureMode { EndpointOnly, AllPoints };

std::string_view to_string(MeasureMode mode);
MeasureMode parse_measure_mode(std::string_view name);

/// A ground-truth safety indicator (>= 0 means safe) with its experiment setup.
struct Benchmark {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> ground_truth;
  Domain domain;
  double noise_std = 0.0;
  Hyperparams hyperparams;
  int discretization = 5;        ///< m, points per trajectory
  int eval_resolution = 100;     ///< grid points per axis for the metrics
  MeasureMode measure_mode = MeasureMode::EndpointOnly;
  Dataset training;              ///< fixed training set, if the preset has one
  Eigen::MatrixXd trajectory;    ///< fixed trajectory, if the preset has one

  /// Tensor grid with eval_resolution points per axis, endpoints included.
  Eigen::MatrixXd eval_grid() const;
  Eigen::VectorXd truth_at(const Eigen::MatrixXd& points) const;
};

/// -0.2 sin(10x) - x + 1.1
double toy1d(double x);
/// (x^2 + y - 11)^2 + (x + y^2 - 7)^2
double himmelblau(double x, double y);
/// 0.01 (himmelblau(x, y) - 50): non-negative on the safe set f >= 50.
double himmelblau_safety(double x, double y);

/// 1D toy: 21 equispaced noise-free training points on [0, 1], a 50-point
/// trajectory over the whole interval, sigma_f = 1, l^2 = 1/32, sigma_n^2 = 1e-3.
Benchmark toy_preset();
/// Himmelblau on [-3, 3]^2: l^2 = 1, sigma_f^2 = 1, noise std 0.01, m = 5,
/// endpoint-only measurements, 100 x 100 metric grid.
Benchmark himmelblau_preset();
/// Looks up "toy1d" or "himmelblau"; throws InputError otherwise.
Benchmark preset(std::string_view name);

/// Evaluation grid with the ground truth precomputed.
struct EvalGrid {
  Eigen::MatrixXd points;
  Eigen::VectorXd truth;
};
EvalGrid make_eval_grid(const Benchmark& bench);

struct Metrics {
  double rmse = 0.0;
  double health_coverage = 0.0;
};

/// Root mean squared error of the posterior mean on the evaluation grid.
double rmse(const GPModel& model, const Benchmark& bench);
/// Fraction of grid points where sign(mu) agrees with sign(z), zero counted as safe.
double health_coverage(const GPModel& model, const Benchmark& bench);
/// Both metrics from a single pass over a prepared grid.
Metrics evaluate_metrics(const GPModel& model, const EvalGrid& grid);

/// Noisy starting data: the domain centre plus count - 1 points drawn
/// uniformly within +-radius of it.
Dataset initial_dataset(const Benchmark& bench, std::size_t count, double radius,
                        std::uint64_t seed);

}  // namespace safegp
