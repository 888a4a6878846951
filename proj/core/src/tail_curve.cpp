#include "safegp/tail_curve.hpp"

#include <algorithm>
#include <numeric>

#include "safegp/bounds.hpp"
#include "safegp/centering.hpp"
#include "safegp/errors.hpp"

namespace safegp {

namespace {

struct Simulated {
  std::vector<double> sorted;
  double median = 0.0;
  double mean = 0.0;
  double sigma_tilde = 0.0;
};

Simulated simulate(const TrajectoryPosterior& tp, std::size_t mc_samples, std::uint64_t seed) {
  if (mc_samples == 0) throw InputError("tail_curve: mc_samples must be positive");
  const auto process = center(tp);
  if (!process) throw InputError("tail_curve: posterior mean changes sign along the trajectory");
  if (!(process->sigma_tilde > 0.0)) throw InputError("tail_curve: degenerate (zero-variance) process");

  Simulated sim;
  sim.sigma_tilde = process->sigma_tilde;
  sim.sorted = sample_maxima(*process, mc_samples, seed);
  std::sort(sim.sorted.begin(), sim.sorted.end());
  sim.mean = std::accumulate(sim.sorted.begin(), sim.sorted.end(), 0.0) /
             static_cast<double>(sim.sorted.size());
  // floor(M/2)-th order statistic; the first one when M == 1.
  const auto median = empirical_quantile(sim.sorted, 0.5);
  sim.median = median ? *median : sim.sorted.front();
  return sim;
}

TailCurve evaluate(const Simulated& sim, const std::vector<double>& thresholds) {
  TailCurve curve;
  curve.median = sim.median;
  curve.mean = sim.mean;
  curve.sigma_tilde = sim.sigma_tilde;
  curve.samples = sim.sorted.size();
  curve.points.reserve(thresholds.size());
  const double total = static_cast<double>(sim.sorted.size());
  for (const double x : thresholds) {
    TailPoint pt;
    pt.threshold = x;
    const auto above = sim.sorted.end() - std::upper_bound(sim.sorted.begin(), sim.sorted.end(), x);
    pt.mc = static_cast<double>(above) / total;
    const double u_median = x - sim.median;
    const double u_mean = x - sim.mean;
    if (u_median >= 0.0) {
      pt.b1 = borell_tail(u_median, sim.sigma_tilde, BorellKind::B1);
      pt.b2 = borell_tail(u_median, sim.sigma_tilde, BorellKind::B2);
    }
    if (u_mean >= 0.0) pt.b3 = borell_tail(u_mean, sim.sigma_tilde, BorellKind::B3);
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace

TailCurve tail_curve(const TrajectoryPosterior& tp, const std::vector<double>& thresholds,
                     std::size_t mc_samples, std::uint64_t seed) {
  return evaluate(simulate(tp, mc_samples, seed), thresholds);
}

TailCurve tail_curve_grid(const TrajectoryPosterior& tp, std::size_t grid_points, double span,
                          std::size_t mc_samples, std::uint64_t seed) {
  if (grid_points < 2) throw InputError("tail_curve_grid: need at least two grid points");
  if (!(span > 0.0)) throw InputError("tail_curve_grid: span must be positive");
  const Simulated sim = simulate(tp, mc_samples, seed);
  std::vector<double> grid(grid_points);
  const double step = span * sim.sigma_tilde / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) grid[i] = sim.median + step * static_cast<double>(i);
  grid.front() = sim.median;
  return evaluate(sim, grid);
}

}  // namespace safegp
