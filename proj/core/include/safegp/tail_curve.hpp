#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "safegp/gp.hpp"

namespace safegp {

struct TailPoint {
  double threshold = 0.0;
  double mc = 0.0;   ///< fraction of simulated maxima above threshold
  double b1 = 1.0;   ///< 1 - Phi(u / sigma), u = threshold - median
  double b2 = 1.0;   ///< exp(-u^2 / (2 sigma^2)) / 2, same u
  double b3 = 1.0;   ///< exp(-u^2 / (2 sigma^2)), u = threshold - mean
};

struct TailCurve {
  double median = 0.0;        ///< empirical median of the maxima
  double mean = 0.0;          ///< sample mean of the maxima
  double sigma_tilde = 0.0;
  std::size_t samples = 0;
  std::vector<TailPoint> points;
};

/// Monte-Carlo tail P(max_j X_j > x) of the centered process next to the
/// three Borell-TIS bounds. Bounds with negative u are reported as 1.
/// Throws InputError if the posterior mean is not strictly positive.
TailCurve tail_curve(const TrajectoryPosterior& tp, const std::vector<double>& thresholds,
                     std::size_t mc_samples, std::uint64_t seed);

/// Same curve on an evenly spaced grid over [median, median + span * sigma_tilde],
/// the grid being placed after the median is estimated from the same draws.
TailCurve tail_curve_grid(const TrajectoryPosterior& tp, std::size_t grid_points, double span,
                          std::size_t mc_samples, std::uint64_t seed);

}  // namespace safegp
