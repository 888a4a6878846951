#include "safegp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "safegp/errors.hpp"
#include "safegp/normal.hpp"

namespace safegp {

namespace {

// floor(M * beta) with slack for products such as 100 * 0.29 = 28.999...
std::size_t order_index(std::size_t samples, double beta) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(samples) * beta + 1e-9));
}

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

double okamoto_radius(std::size_t samples, int round, double epsilon) {
  if (samples < 1 || round < 1 || !(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("okamoto_radius: need M >= 1, r >= 1, epsilon in (0, 1)");
  }
  const double r = static_cast<double>(round);
  const double log_term = std::abs(std::log(6.0 * epsilon / (kPi2 * r * r)));
  return std::sqrt(2.0 / static_cast<double>(samples) * log_term);
}

double median_confidence(int round, double epsilon) {
  const double r = static_cast<double>(round);
  return 1.0 - 6.0 * epsilon / (kPi2 * r * r);
}

std::optional<QuantileLevels> median_quantile_levels(std::size_t samples, int round,
                                                     double epsilon) {
  if (samples < 1 || round < 1 || !(epsilon > 0.0)) {
    throw InputError("median_quantile_levels: need M >= 1, r >= 1, epsilon > 0");
  }
  const double chi = median_confidence(round, epsilon);
  if (!(chi > 0.5 && chi < 1.0)) {
    throw InputError("median_quantile_levels: confidence chi must lie in (1/2, 1)");
  }
  const double half_width = normal_quantile(chi) / std::sqrt(4.0 * static_cast<double>(samples));
  QuantileLevels levels{0.5 - half_width, 0.5 + half_width};
  if (levels.upper >= 1.0 || levels.lower <= 0.0 || order_index(samples, levels.lower) < 1) {
    return std::nullopt;
  }
  return levels;
}

std::optional<double> empirical_quantile(std::span<const double> samples, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("empirical_quantile: beta must lie in [0, 1]");
  const std::size_t k = order_index(samples.size(), beta);
  if (k == 0) return std::nullopt;
  std::vector<double> work(samples.begin(), samples.end());
  auto kth = work.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(work.begin(), kth, work.end());
  return *kth;
}

double borell_tail(double u, double sigma, BorellKind kind) {
  if (!(u >= 0.0)) throw InputError("borell_tail: u must be non-negative");
  if (!(sigma > 0.0)) throw InputError("borell_tail: sigma must be positive");
  const double z = u / sigma;
  switch (kind) {
    case BorellKind::B1:
      return normal_sf(z);
    case BorellKind::B2:
      return 0.5 * std::exp(-0.5 * z * z);
    case BorellKind::B3:
      return std::exp(-0.5 * z * z);
  }
  return 1.0;
}

std::optional<double> borell_point_bound(double q_med, double sigma_tilde) {
  if (!(sigma_tilde >= 0.0)) throw InputError("borell_point_bound: sigma_tilde must be >= 0");
  if (q_med > 1.0) return std::nullopt;
  if (sigma_tilde < 1e-12) return q_med < 1.0 ? 0.0 : 0.5;
  return normal_sf((1.0 - q_med) / sigma_tilde);
}

}  // namespace safegp
