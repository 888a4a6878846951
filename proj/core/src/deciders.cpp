#include "safegp/deciders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "safegp/bounds.hpp"
#include "safegp/errors.hpp"
#include "safegp/normal.hpp"

namespace safegp {

std::size_t SamplingSchedule::size(int round) const {
  if (round <= 0) return 0;
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(initial) * std::pow(growth, round - 1)));
}

void SamplingSchedule::validate() const {
  if (initial < 1) throw InputError("schedule: initial batch must be >= 1");
  if (rounds < 1) throw InputError("schedule: at least one round is required");
  for (int r = 1; r <= rounds; ++r) {
    if (size(r) <= size(r - 1)) throw InputError("schedule: batch sizes must strictly increase");
  }
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MC: return "MC";
    case Method::AMC: return "AMC";
    case Method::AB: return "AB";
    case Method::ABM: return "ABM";
  }
  return "?";
}

std::string_view to_string(Decision decision) {
  return decision == Decision::Safe ? "Safe" : "Unsafe";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::BoundCrossed: return "BoundCrossed";
    case StopReason::BudgetExhausted: return "BudgetExhausted";
    case StopReason::MeanSignChange: return "MeanSignChange";
    case StopReason::MedianInfeasible: return "MedianInfeasible";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  const std::string key = lower(name);
  for (Method m : {Method::MC, Method::AMC, Method::AB, Method::ABM}) {
    if (lower(to_string(m)) == key) return m;
  }
  throw InputError("unknown method '" + std::string(name) + "'");
}

Decision parse_decision(std::string_view name) {
  const std::string key = lower(name);
  if (key == "safe") return Decision::Safe;
  if (key == "unsafe") return Decision::Unsafe;
  throw InputError("unknown decision '" + std::string(name) + "'");
}

StopReason parse_reason(std::string_view name) {
  const std::string key = lower(name);
  for (StopReason r : {StopReason::BoundCrossed, StopReason::BudgetExhausted,
                       StopReason::MeanSignChange, StopReason::MedianInfeasible}) {
    if (lower(to_string(r)) == key) return r;
  }
  throw InputError("unknown stop reason '" + std::string(name) + "'");
}

void DeciderConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw InputError("alpha must lie in (0, 1/2]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  schedule.validate();
}

namespace {

// 1 - Phi((1 - q) / sigma_tilde), with the deterministic-process guard.
double borell_value(double q, double sigma_tilde) {
  if (sigma_tilde < 1e-12) return q < 1.0 ? 0.0 : (q == 1.0 ? 0.5 : 1.0);
  return normal_sf((1.0 - q) / sigma_tilde);
}

std::size_t count_exceedances(std::span<const double> maxima) {
  return static_cast<std::size_t>(
      std::count_if(maxima.begin(), maxima.end(), [](double s) { return s >= 1.0; }));
}

struct McBounds {
  double upper;
  double lower;
};

// Upper bound at eps_up, lower bound at eps_down.
McBounds mc_bounds(double p_hat, std::size_t samples, int round, double alpha, double eps_up,
                   double eps_down) {
  const double c_up = okamoto_radius(samples, round, eps_up);
  const double c_down = okamoto_radius(samples, round, eps_down);
  return {p_hat + std::sqrt(alpha * (1.0 - alpha)) * c_up,
          p_hat - 0.25 * c_down * c_down - c_down * std::sqrt(alpha)};
}

SafetyVerdict blank_verdict(const DeciderConfig& cfg) {
  SafetyVerdict v;
  v.method = cfg.method;
  v.alpha = cfg.alpha;
  v.epsilon = cfg.epsilon;
  return v;
}

SafetyVerdict run_mc(MaximaStream& stream, const DeciderConfig& cfg) {
  SafetyVerdict v = blank_verdict(cfg);
  const int budget_round = std::max(1, cfg.schedule.rounds - 1);
  const std::size_t m = cfg.schedule.size(budget_round);
  std::vector<double> maxima(m);
  stream.draw(1, maxima);
  const double p_hat = static_cast<double>(count_exceedances(maxima)) / static_cast<double>(m);
  const McBounds b = mc_bounds(p_hat, m, 1, cfg.alpha, cfg.epsilon, cfg.epsilon);
  v.stop_round = 1;
  v.samples_used = m;
  v.upper_bound = b.upper;
  v.lower_bound = b.lower;
  if (b.upper < cfg.alpha) {
    v.decision = Decision::Safe;
    v.reason = StopReason::BoundCrossed;
  } else {
    v.decision = Decision::Unsafe;
    v.reason = StopReason::BudgetExhausted;
  }
  return v;
}

// Shared adaptive loop. The MC arm always runs; the Borell arm runs for AB
// (both sides) and ABM (safe side only, at eps/2).
SafetyVerdict run_adaptive(MaximaStream& stream, double sigma_tilde, const DeciderConfig& cfg) {
  SafetyVerdict v = blank_verdict(cfg);
  const bool use_mc = cfg.method != Method::AB;
  const bool use_borell = cfg.method != Method::AMC;
  const bool borell_unsafe_side = cfg.method == Method::AB;
  const double eps_mc_up = cfg.method == Method::ABM ? 0.5 * cfg.epsilon : cfg.epsilon;
  const double eps_borell = cfg.method == Method::ABM ? 0.5 * cfg.epsilon : cfg.epsilon;

  std::vector<double> maxima;
  std::size_t exceed = 0;
  bool any_feasible = false;
  const std::size_t m_final = cfg.schedule.size(cfg.schedule.rounds);
  if (use_borell) maxima.reserve(m_final);

  std::vector<double> batch;
  for (int r = 1; r <= cfg.schedule.rounds; ++r) {
    const std::size_t m_prev = cfg.schedule.size(r - 1);
    const std::size_t m = cfg.schedule.size(r);
    batch.resize(m - m_prev);
    stream.draw(r, batch);
    exceed += count_exceedances(batch);
    if (use_borell) maxima.insert(maxima.end(), batch.begin(), batch.end());
    const double p_hat = static_cast<double>(exceed) / static_cast<double>(m);

    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    if (use_mc) {
      const McBounds b = mc_bounds(p_hat, m, r, cfg.alpha, eps_mc_up, cfg.epsilon);
      upper = b.upper;
      lower = b.lower;
    }
    if (use_borell && median_confidence(r, eps_borell) > 0.5) {
      if (const auto levels = median_quantile_levels(m, r, eps_borell)) {
        const double q_up = *empirical_quantile(maxima, levels->upper);
        // The safe test needs the median bound to be feasible (q+ < 1).
        if (q_up < 1.0) {
          any_feasible = true;
          upper = std::min(upper, borell_value(q_up, sigma_tilde));
        } else if (!use_mc) {
          upper = borell_value(q_up, sigma_tilde);
        }
        if (borell_unsafe_side) {
          lower = borell_value(*empirical_quantile(maxima, levels->lower), sigma_tilde);
        }
      }
    }

    v.stop_round = r;
    v.samples_used = m;
    if (std::isfinite(upper)) v.upper_bound = upper;
    if (std::isfinite(lower)) v.lower_bound = lower;
    if (upper < cfg.alpha) {
      v.decision = Decision::Safe;
      v.reason = StopReason::BoundCrossed;
      return v;
    }
    if (lower > cfg.alpha) {
      v.decision = Decision::Unsafe;
      v.reason = StopReason::BoundCrossed;
      return v;
    }
  }

  v.decision = Decision::Unsafe;
  v.reason = (cfg.method == Method::AB && !any_feasible) ? StopReason::MedianInfeasible
                                                         : StopReason::BudgetExhausted;
  return v;
}

SafetyVerdict sign_change_verdict(const DeciderConfig& cfg) {
  SafetyVerdict v = blank_verdict(cfg);
  v.decision = Decision::Unsafe;
  v.reason = StopReason::MeanSignChange;
  v.stop_round = 0;
  v.samples_used = 0;
  v.lower_bound = 0.5;
  v.upper_bound = 1.0;
  return v;
}

SafetyVerdict decide_as(Method method, const TrajectoryPosterior& tp, const DeciderConfig& cfg,
                        std::uint64_t seed) {
  if (cfg.method != method) {
    throw InputError("decider called with a config for method " + std::string(to_string(cfg.method)));
  }
  return decide(tp, cfg, seed);
}

}  // namespace

SafetyVerdict decide(MaximaStream& stream, double sigma_tilde, const DeciderConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::MC) return run_mc(stream, cfg);
  return run_adaptive(stream, sigma_tilde, cfg);
}

SafetyVerdict decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto process = center(tp);
  if (!process) return sign_change_verdict(cfg);
  GaussianMaximaStream stream(*process, seed);
  return decide(stream, process->sigma_tilde, cfg);
}

SafetyVerdict mc_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed) {
  return decide_as(Method::MC, tp, cfg, seed);
}

SafetyVerdict amc_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed) {
  return decide_as(Method::AMC, tp, cfg, seed);
}

SafetyVerdict ab_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed) {
  return decide_as(Method::AB, tp, cfg, seed);
}

SafetyVerdict abm_decide(const TrajectoryPosterior& tp, const DeciderConfig& cfg, std::uint64_t seed) {
  return decide_as(Method::ABM, tp, cfg, seed);
}

}  // namespace safegp
