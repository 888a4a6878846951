#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <safegp/safegp.hpp>

namespace safegp::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kNumerical = 3 };

/// Bad flag values or combinations; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CompareBoundsOptions {
  std::string preset = "toy1d";
  std::size_t samples = 1'000'000;
  std::size_t grid = 20;
  double span = 4.0;  ///< grid covers [median, median + span * sigma_tilde]
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct RunSalOptions {
  std::string preset = "himmelblau";
  Method method = Method::ABM;
  double alpha = 0.01;
  double epsilon = 0.05;
  int rounds = 10;
  std::size_t budget = 5'000'000;
  std::uint64_t seed = 0;
  int m = 0;  ///< 0: preset default
  std::size_t candidates = 20;
  std::size_t initial = 5;
  double initial_radius = 0.25;
  int max_retries = 10;
  std::string out = ".";
};

enum class SyntheticProcess { Bernoulli, Gaussian };

struct CalibrateOptions {
  Method method = Method::AMC;
  double alpha = 0.01;
  double epsilon = 0.05;
  int rounds = 12;
  double p_true = 0.02;
  std::size_t runs = 1000;
  std::uint64_t seed = 0;
  SyntheticProcess process = SyntheticProcess::Bernoulli;
  // Gaussian process: mean level c over m points of a unit-variance SE process
  // on [0, 1]. Without an explicit level, c is placed so that P* = p_true.
  int m = 10;
  double lengthscale = 0.25;
  std::optional<double> level;
  std::size_t oracle_samples = 1'000'000;
  std::string out = ".";
};

struct CalibrationSummary {
  std::size_t runs = 0;
  std::size_t safe = 0;
  std::size_t unsafe = 0;
  double safe_rate = 0.0;
  double unsafe_rate = 0.0;
  double false_safe_rate = 0.0;    ///< safe_rate if p_star >= alpha, else 0
  double false_unsafe_rate = 0.0;  ///< unsafe_rate if p_star <= alpha, else 0
  double mean_samples = 0.0;
  double mean_stop_round = 0.0;
  double p_star = 0.0;                 ///< known (Bernoulli) or oracle-estimated P*
  std::optional<double> p_dagger;      ///< semi-analytic bound from the oracle median
  std::optional<double> level;         ///< Gaussian mean level c
};

struct CalibrationResult {
  CalibrationSummary summary;
  std::vector<SafetyVerdict> verdicts;  ///< indexed by run
};

/// The synthetic Gaussian calibration process at mean level c.
TrajectoryPosterior calibration_process(int m, double lengthscale, double level);

/// Runs the calibration study without touching the filesystem.
CalibrationResult run_calibration(const CalibrateOptions& opts);

// Each command writes a manifest, then its result files, and returns an exit code.
int cmd_compare_bounds(const CompareBoundsOptions& opts);
int cmd_run_sal(const RunSalOptions& opts);
int cmd_calibrate(const CalibrateOptions& opts);

/// Output paths used by the commands, relative to opts.out.
std::string compare_bounds_stem(const CompareBoundsOptions& opts);
std::string run_sal_stem(const RunSalOptions& opts);
std::string calibrate_stem(const CalibrateOptions& opts);

/// Full command-line entry point: parses args (and --config files), dispatches,
/// maps exceptions to exit codes.
int run(const std::vector<std::string>& args);

}  // namespace safegp::cli
