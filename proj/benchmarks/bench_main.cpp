#include <benchmark/benchmark.h>

#include <safegp/safegp.hpp>

using namespace safegp;

namespace {

TrajectoryPosterior toy_posterior() {
  const Benchmark toy = toy_preset();
  return GPModel::fit(toy.hyperparams, toy.training).posterior(toy.trajectory);
}

Dataset scattered_data(int n, std::uint64_t seed) {
  Engine eng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Dataset d;
  d.inputs.resize(n, 2);
  d.outputs.resize(n);
  for (int i = 0; i < n; ++i) {
    d.inputs(i, 0) = u(eng);
    d.inputs(i, 1) = u(eng);
    d.outputs(i) = himmelblau_safety(d.inputs(i, 0), d.inputs(i, 1));
  }
  return d;
}

}  // namespace

static void BM_KernelMatrix(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const Dataset d = scattered_data(n, 1);
  const auto theta = Hyperparams::isotropic(2, 1.0, 1.0, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(se_kernel_matrix(d.inputs, d.inputs, theta));
  state.SetComplexityN(n);
}
BENCHMARK(BM_KernelMatrix)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_Fit(benchmark::State& state) {
  const Dataset d = scattered_data(static_cast<int>(state.range(0)), 2);
  const auto theta = Hyperparams::isotropic(2, 1.0, 1.0, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(GPModel::fit(theta, d).weights());
}
BENCHMARK(BM_Fit)->RangeMultiplier(4)->Range(16, 1024);

static void BM_AppendObservation(benchmark::State& state) {
  const Dataset d = scattered_data(static_cast<int>(state.range(0)), 3);
  const auto theta = Hyperparams::isotropic(2, 1.0, 1.0, 1e-4);
  const GPModel model = GPModel::fit(theta, d);
  const Eigen::MatrixXd x = Eigen::RowVector2d(0.1, 0.2);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(model.with_observations(x, y).weights());
}
BENCHMARK(BM_AppendObservation)->RangeMultiplier(4)->Range(16, 1024);

static void BM_SampleMaxima(benchmark::State& state) {
  const auto centered = center(toy_posterior());
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_maxima(*centered, count, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_SampleMaxima)->Arg(10'000)->Arg(100'000);

static void BM_Decide(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const auto tp = toy_posterior();
  DeciderConfig cfg;
  cfg.method = method;
  cfg.schedule.rounds = 10;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decide(tp, cfg, seed++));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Decide)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_OkamotoRadius(benchmark::State& state) {
  int r = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(okamoto_radius(100u << (r - 1), r, 0.05));
    r = r % 14 + 1;
  }
}
BENCHMARK(BM_OkamotoRadius);
BENCHMARK_MAIN();
