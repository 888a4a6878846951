#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace safegp {

/// c_r = sqrt(2 / M_r * |log(6 eps / (pi^2 r^2))|).
double okamoto_radius(std::size_t samples, int round, double epsilon);

/// chi(r, eps) = 1 - 6 eps / (pi^2 r^2).
double median_confidence(int round, double epsilon);

struct QuantileLevels {
  double lower = 0.5;
  double upper = 0.5;
};

/// Order-statistic levels beta_-/+ = 1/2 -/+ Phi^{-1}(chi(r, eps)) / sqrt(4M)
/// bracketing the median with confidence chi each.
///
/// Returns nullopt when M is too small for the interval (beta_+ >= 1 or
/// floor(M beta_-) < 1). Throws InputError unless chi lies in (1/2, 1).
std::optional<QuantileLevels> median_quantile_levels(std::size_t samples, int round,
                                                     double epsilon);

/// floor(M beta)-th smallest sample (1-based); nullopt if floor(M beta) == 0.
std::optional<double> empirical_quantile(std::span<const double> samples, double beta);

enum class BorellKind { B1, B2, B3 };

/// Borell-TIS tail bound at distance u >= 0 above the median (B1, B2) or the
/// mean (B3) of the supremum, for maximal standard deviation sigma > 0.
double borell_tail(double u, double sigma, BorellKind kind);

/// 1 - Phi((1 - q_med) / sigma_tilde): the semi-analytic bound on P*.
///
/// nullopt when q_med > 1 (median infeasible). sigma_tilde below 1e-12 is
/// treated as a deterministic process.
std::optional<double> borell_point_bound(double q_med, double sigma_tilde);

}  // namespace safegp
