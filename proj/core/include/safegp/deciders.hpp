#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "safegp/centering.hpp"
#include "safegp/gp.hpp"

namespace safegp {

/// Batch sizes M_r = initial * growth^(r-1), r = 1..rounds.
struct SamplingSchedule {
  std::size_t initial = 100;
  double growth = 2.0;
  int rounds = 14;

  /// M_r; M_0 = 0.
  std::size_t size(int round) const;
  /// Throws InputError unless initial >= 1, rounds >= 1 and M_r strictly increases.
  void validate() const;
};

enum class Method { MC, AMC, AB, ABM };
enum class Decision { Safe, Unsafe };
enum class StopReason { BoundCrossed, BudgetExhausted, MeanSignChange, MedianInfeasible };

std::string_view to_string(Method method);
std::string_view to_string(Decision decision);
std::string_view to_string(StopReason reason);
/// Case-insensitive; throws InputError on unknown names.
Method parse_method(std::string_view name);
Decision parse_decision(std::string_view name);
StopReason parse_reason(std::string_view name);

struct DeciderConfig {
  double alpha = 0.01;
  double epsilon = 0.05;
  SamplingSchedule schedule;
  Method method = Method::ABM;

  /// alpha in (0, 1/2], epsilon in (0, 1), valid schedule.
  void validate() const;
};

struct SafetyVerdict {
  Method method = Method::AMC;
  Decision decision = Decision::Unsafe;
  StopReason reason = StopReason::BudgetExhausted;
  int stop_round = 0;
  std::size_t samples_used = 0;
  double lower_bound = 0.0;   ///< last lower confidence bound on the unsafety probability
  double upper_bound = 1.0;   ///< last upper confidence bound
  double alpha = 0.0;
  double epsilon = 0.0;

  bool safe() const { return decision == Decision::Safe; }
  friend bool operator==(const SafetyVerdict&, const SafetyVerdict&) = default;
};

/// Runs cfg.method on an arbitrary maxima stream.
///
/// sigma_tilde feeds the Borell arm of AB/ABM; pass +inf to disable it
/// (the bound then never drops below 1/2).
SafetyVerdict decide(MaximaStream& stream, double sigma_tilde, const DeciderConfig& cfg);

/// Centers tp and runs cfg.method on Gaussian maxima seeded by seed. A mean
/// sign change yields Unsafe / MeanSignChange before any sampling.
SafetyVerdict decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed);

// Method-specific entry points; cfg.method must match.
SafetyVerdict mc_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed);
SafetyVerdict amc_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed);
SafetyVerdict ab_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed);
SafetyVerdict abm_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed);

}  // namespace safegp
