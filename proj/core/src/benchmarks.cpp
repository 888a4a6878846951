#include "safegp/benchmarks.hpp"

#include <cmath>

#include "safegp/errors.hpp"
#include "safegp/random.hpp"

namespace safegp {

std::string_view to_string(MeasureMode mode) {
  return mode == MeasureMode::EndpointOnly ? "EndpointOnly" : "AllPoints";
}

MeasureMode parse_measure_mode(std::string_view name) {
  if (name == "EndpointOnly" || name == "endpoint") return MeasureMode::EndpointOnly;
  if (name == "AllPoints" || name == "all") return MeasureMode::AllPoints;
  throw InputError("unknown measure mode '" + std::string(name) + "'");
}

Eigen::MatrixXd Benchmark::eval_grid() const {
  if (eval_resolution < 2) throw InputError("eval grid needs at least two points per axis");
  const Eigen::Index d = domain.dim();
  Eigen::Index total = 1;
  for (Eigen::Index k = 0; k < d; ++k) total *= eval_resolution;
  Eigen::MatrixXd grid(total, d);
  for (Eigen::Index row = 0; row < total; ++row) {
    Eigen::Index rest = row;
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index idx = rest % eval_resolution;
      rest /= eval_resolution;
      const double s = static_cast<double>(idx) / static_cast<double>(eval_resolution - 1);
      grid(row, k) = domain.lo(k) + s * (domain.hi(k) - domain.lo(k));
    }
  }
  return grid;
}

Eigen::VectorXd Benchmark::truth_at(const Eigen::MatrixXd& points) const {
  Eigen::VectorXd z(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) z(i) = ground_truth(points.row(i).transpose());
  return z;
}

double toy1d(double x) { return -0.2 * std::sin(10.0 * x) - x + 1.1; }

double himmelblau(double x, double y) {
  const double a = x * x + y - 11.0;
  const double b = x + y * y - 7.0;
  return a * a + b * b;
}

double himmelblau_safety(double x, double y) { return 0.01 * (himmelblau(x, y) - 50.0); }

Benchmark toy_preset() {
  Benchmark b;
  b.name = "toy1d";
  b.ground_truth = [](const Eigen::VectorXd& x) { return toy1d(x(0)); };
  b.domain = {Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0)};
  b.noise_std = std::sqrt(1e-3);
  b.hyperparams = Hyperparams::isotropic(1, 1.0, std::sqrt(1.0 / 32.0), 1e-3);
  b.discretization = 50;
  b.eval_resolution = 1000;
  b.measure_mode = MeasureMode::EndpointOnly;

  b.training.inputs = Eigen::VectorXd::LinSpaced(21, 0.0, 1.0);
  b.training.outputs = b.training.inputs.col(0).unaryExpr([](double x) { return toy1d(x); });
  b.trajectory = Eigen::VectorXd::LinSpaced(50, 0.0, 1.0);
  return b;
}

Benchmark himmelblau_preset() {
  Benchmark b;
  b.name = "himmelblau";
  b.ground_truth = [](const Eigen::VectorXd& x) { return himmelblau_safety(x(0), x(1)); };
  b.domain = {Eigen::VectorXd::Constant(2, -3.0), Eigen::VectorXd::Constant(2, 3.0)};
  b.noise_std = 0.01;
  b.hyperparams = Hyperparams::isotropic(2, 1.0, 1.0, 0.01 * 0.01);
  b.discretization = 5;
  b.eval_resolution = 100;
  b.measure_mode = MeasureMode::EndpointOnly;
  return b;
}

Benchmark preset(std::string_view name) {
  if (name == "toy1d") return toy_preset();
  if (name == "himmelblau") return himmelblau_preset();
  throw InputError("unknown preset '" + std::string(name) + "'");
}

EvalGrid make_eval_grid(const Benchmark& bench) {
  EvalGrid grid;
  grid.points = bench.eval_grid();
  grid.truth = bench.truth_at(grid.points);
  return grid;
}

Metrics evaluate_metrics(const GPModel& model, const EvalGrid& grid) {
  const Eigen::VectorXd mu = model.mean_at(grid.points);
  Metrics out;
  out.rmse = std::sqrt((mu - grid.truth).squaredNorm() / static_cast<double>(mu.size()));
  Eigen::Index agree = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if ((mu(i) >= 0.0) == (grid.truth(i) >= 0.0)) ++agree;
  }
  out.health_coverage = static_cast<double>(agree) / static_cast<double>(mu.size());
  return out;
}

double rmse(const GPModel& model, const Benchmark& bench) {
  return evaluate_metrics(model, make_eval_grid(bench)).rmse;
}

double health_coverage(const GPModel& model, const Benchmark& bench) {
  return evaluate_metrics(model, make_eval_grid(bench)).health_coverage;
}

Dataset initial_dataset(const Benchmark& bench, std::size_t count, double radius,
                        std::uint64_t seed) {
  if (count == 0) throw InputError("initial_dataset: count must be positive");
  const Eigen::Index d = bench.domain.dim();
  const Eigen::VectorXd centre = 0.5 * (bench.domain.lo + bench.domain.hi);
  Engine engine = make_engine(seed, "initial-data");
  std::uniform_real_distribution<double> offset(-radius, radius);
  std::normal_distribution<double> noise(0.0, 1.0);

  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(count), d);
  data.outputs.resize(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
    Eigen::VectorXd x = centre;
    if (i > 0) {
      for (Eigen::Index k = 0; k < d; ++k) x(k) += offset(engine);
    }
    data.inputs.row(i) = x.transpose();
    data.outputs(i) = bench.ground_truth(x) + bench.noise_std * noise(engine);
  }
  return data;
}

}  // namespace safegp
