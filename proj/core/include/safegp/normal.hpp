#pragma once

namespace safegp {

/// Standard normal distribution function Phi(x).
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x), evaluated without cancellation for large x.
double normal_sf(double x) noexcept;

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
///
/// Rational starting approximation refined by one Halley step against
/// normal_cdf; absolute error is below 1e-12 on (1e-300, 1 - 1e-16).
/// Returns -inf / +inf at p == 0 / p == 1 and throws InputError outside [0, 1].
double normal_quantile(double p);

}  // namespace safegp
