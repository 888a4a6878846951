#include "safegp_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>

#include <json.hpp>

namespace safegp::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view to_string(SyntheticProcess p) {
  return p == SyntheticProcess::Bernoulli ? "bernoulli" : "gaussian";
}

// Writes the manifest before any result and rewrites it with the wall time at
// the end, so an aborted run still leaves a record of what was attempted.
class Manifest {
 public:
  Manifest(std::string command, json config, std::uint64_t seed, const std::string& out,
           const std::string& stem, std::vector<std::string> outputs)
      : start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out);
    path_ = (fs::path(out) / (stem + ".manifest.json")).string();
    doc_ = {{"command", std::move(command)},
            {"config", std::move(config)},
            {"seed", seed},
            {"version", safegp::version()},
            {"started_at", utc_timestamp()},
            {"wall_time_s", nullptr},
            {"outputs", outputs}};
    flush();
  }

  void finish() {
    doc_["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    flush();
  }

 private:
  void flush() const { write_text_file(path_, doc_.dump(2) + "\n"); }

  std::chrono::steady_clock::time_point start_;
  std::string path_;
  json doc_;
};

std::string out_path(const std::string& out, const std::string& name) {
  return (fs::path(out) / name).string();
}

Benchmark lookup_preset(const std::string& name) {
  try {
    return preset(name);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

json config_json(const CompareBoundsOptions& o) {
  return {{"preset", o.preset}, {"samples", o.samples}, {"grid", o.grid}, {"span", o.span},
          {"seed", o.seed},     {"out", o.out}};
}

json config_json(const RunSalOptions& o) {
  return {{"preset", o.preset},
          {"method", std::string(to_string(o.method))},
          {"alpha", o.alpha},
          {"epsilon", o.epsilon},
          {"rounds", o.rounds},
          {"budget", o.budget},
          {"seed", o.seed},
          {"m", o.m},
          {"candidates", o.candidates},
          {"initial", o.initial},
          {"initial-radius", o.initial_radius},
          {"max-retries", o.max_retries},
          {"out", o.out}};
}

json config_json(const CalibrateOptions& o) {
  json j = {{"method", std::string(to_string(o.method))},
            {"alpha", o.alpha},
            {"epsilon", o.epsilon},
            {"rounds", o.rounds},
            {"p-true", o.p_true},
            {"runs", o.runs},
            {"seed", o.seed},
            {"process", std::string(to_string(o.process))},
            {"m", o.m},
            {"lengthscale", o.lengthscale},
            {"oracle-samples", o.oracle_samples},
            {"out", o.out}};
  if (o.level) j["level"] = *o.level;
  return j;
}

DeciderConfig decider_config(Method method, double alpha, double epsilon, int rounds) {
  DeciderConfig cfg;
  cfg.method = method;
  cfg.alpha = alpha;
  cfg.epsilon = epsilon;
  cfg.schedule.rounds = rounds;
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

}  // namespace

std::string compare_bounds_stem(const CompareBoundsOptions& o) {
  return "compare_bounds_" + o.preset + "_s" + std::to_string(o.seed);
}

std::string run_sal_stem(const RunSalOptions& o) {
  return "run_sal_" + o.preset + "_" + std::string(to_string(o.method)) + "_s" +
         std::to_string(o.seed);
}

std::string calibrate_stem(const CalibrateOptions& o) {
  return "calibrate_" + std::string(to_string(o.method)) + "_" + std::string(to_string(o.process)) +
         "_p" + format_double(o.p_true) + "_s" + std::to_string(o.seed);
}

int cmd_compare_bounds(const CompareBoundsOptions& o) {
  if (o.samples == 0) throw UsageError("compare-bounds: --samples must be positive");
  if (o.grid < 2) throw UsageError("compare-bounds: --grid must be at least 2");
  if (!(o.span > 0.0)) throw UsageError("compare-bounds: --span must be positive");
  const Benchmark bench = lookup_preset(o.preset);
  if (bench.trajectory.rows() == 0) {
    throw UsageError("compare-bounds: preset '" + o.preset + "' has no fixed trajectory");
  }

  const std::string stem = compare_bounds_stem(o);
  const std::string csv = out_path(o.out, stem + ".csv");
  Manifest manifest("compare-bounds", config_json(o), o.seed, o.out, stem, {csv});

  const GPModel model = GPModel::fit(bench.hyperparams, bench.training);
  const TrajectoryPosterior tp = model.posterior(bench.trajectory);
  const TailCurve curve = tail_curve_grid(tp, o.grid, o.span, o.samples, o.seed);
  write_text_file(csv, write_csv(tail_curve_table(curve)));

  std::cout << "median " << format_double(curve.median) << " mean " << format_double(curve.mean)
            << " sigma_tilde " << format_double(curve.sigma_tilde) << "\nwrote " << csv << "\n";
  manifest.finish();
  return kOk;
}

int cmd_run_sal(const RunSalOptions& o) {
  Benchmark bench = lookup_preset(o.preset);
  if (o.budget == 0) throw UsageError("run-sal: --budget must be positive");
  if (o.m < 0) throw UsageError("run-sal: --m must be non-negative");
  if (o.candidates == 0) throw UsageError("run-sal: --candidates must be positive");
  if (o.initial == 0) throw UsageError("run-sal: --initial must be positive");

  SALConfig cfg;
  cfg.decider = decider_config(o.method, o.alpha, o.epsilon, o.rounds);
  cfg.domain = bench.domain;
  cfg.m = o.m > 0 ? o.m : bench.discretization;
  cfg.candidate_count = o.candidates;
  cfg.total_sample_budget = o.budget;
  cfg.measure_mode = bench.measure_mode;
  cfg.seed = o.seed;
  cfg.max_retries = o.max_retries;
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }

  const std::string stem = run_sal_stem(o);
  const std::string csv = out_path(o.out, stem + ".csv");
  const std::string jsonl = out_path(o.out, stem + ".jsonl");
  const std::string summary = out_path(o.out, stem + "_summary.json");
  Manifest manifest("run-sal", config_json(o), o.seed, o.out, stem, {csv, jsonl, summary});

  const Dataset initial = initial_dataset(bench, o.initial, o.initial_radius, o.seed);
  const SALResult result = run_sal(bench, cfg, initial);
  write_text_file(csv, write_csv(records_table(result.records)));
  write_text_file(jsonl, records_jsonl(result.records));
  write_text_file(summary, sal_summary_json(result));

  std::cout << "n_SAL " << result.n_sal << " n_f " << result.n_f << " c_h "
            << format_double(result.final_health_coverage) << " rmse "
            << format_double(result.final_rmse) << " samples " << result.samples_used << "\n";
  manifest.finish();
  return kOk;
}

TrajectoryPosterior calibration_process(int m, double lengthscale, double level) {
  if (m < 1) throw UsageError("calibrate: --m must be positive");
  if (!(lengthscale > 0.0)) throw UsageError("calibrate: --lengthscale must be positive");
  TrajectoryPosterior tp;
  tp.points.resize(m, 1);
  for (int j = 0; j < m; ++j) tp.points(j, 0) = m == 1 ? 0.0 : static_cast<double>(j) / (m - 1);
  tp.mean = Eigen::VectorXd::Constant(m, level);
  tp.covariance = se_kernel_matrix(tp.points, tp.points, Hyperparams::isotropic(1, 1.0, lengthscale, 0.0));
  return tp;
}

CalibrationResult run_calibration(const CalibrateOptions& o) {
  if (o.runs == 0) throw UsageError("calibrate: --runs must be positive");
  if (!(o.p_true >= 0.0 && o.p_true <= 1.0)) throw UsageError("calibrate: --p-true must lie in [0, 1]");
  const DeciderConfig cfg = decider_config(o.method, o.alpha, o.epsilon, o.rounds);

  CalibrationResult result;
  CalibrationSummary& s = result.summary;
  s.runs = o.runs;
  result.verdicts.resize(o.runs);

  if (o.process == SyntheticProcess::Bernoulli) {
    if (o.method == Method::AB) {
      throw UsageError("calibrate: AB needs a Gaussian process (--process gaussian)");
    }
    s.p_star = o.p_true;
    parallel_for(o.runs, [&](std::size_t i) {
      BernoulliMaximaStream stream(o.p_true, derive_seed(o.seed, "calibrate", i));
      result.verdicts[i] = decide(stream, std::numeric_limits<double>::infinity(), cfg);
    });
  } else {
    if (o.oracle_samples < 2) throw UsageError("calibrate: --oracle-samples must be at least 2");
    // Oracle draws of max_j xi_j for xi ~ N(0, K): the level-1 process centers to xi itself.
    const auto unit = center(calibration_process(o.m, o.lengthscale, 1.0));
    std::vector<double> maxima = sample_maxima(*unit, o.oracle_samples, derive_seed(o.seed, "oracle"));
    std::sort(maxima.begin(), maxima.end());
    const std::size_t n = maxima.size();
    double level = 0.0;
    if (o.level) {
      level = *o.level;
    } else {
      if (!(o.p_true > 0.0 && o.p_true < 1.0)) {
        throw UsageError("calibrate: gaussian process needs --p-true in (0, 1) or --level");
      }
      // Smallest oracle value with at most p_true of the maxima at or above it.
      const auto k = static_cast<std::size_t>(std::ceil((1.0 - o.p_true) * static_cast<double>(n)));
      level = maxima[std::min(k, n - 1)];
    }
    if (!(level > 0.0)) throw UsageError("calibrate: mean level must be positive");
    const auto above = maxima.end() - std::lower_bound(maxima.begin(), maxima.end(), level);
    s.p_star = static_cast<double>(above) / static_cast<double>(n);
    const double median = maxima[n / 2 - 1];  // floor(n/2)-th order statistic
    s.p_dagger = normal_sf(level - median);
    s.level = level;

    const TrajectoryPosterior tp = calibration_process(o.m, o.lengthscale, level);
    parallel_for(o.runs, [&](std::size_t i) {
      result.verdicts[i] = decide(tp, cfg, derive_seed(o.seed, "calibrate", i));
    });
  }

  double samples = 0.0;
  double rounds = 0.0;
  for (const SafetyVerdict& v : result.verdicts) {
    (v.safe() ? s.safe : s.unsafe) += 1;
    samples += static_cast<double>(v.samples_used);
    rounds += v.stop_round;
  }
  const double runs = static_cast<double>(o.runs);
  s.safe_rate = static_cast<double>(s.safe) / runs;
  s.unsafe_rate = static_cast<double>(s.unsafe) / runs;
  s.false_safe_rate = s.p_star >= o.alpha ? s.safe_rate : 0.0;
  s.false_unsafe_rate = s.p_star <= o.alpha ? s.unsafe_rate : 0.0;
  s.mean_samples = samples / runs;
  s.mean_stop_round = rounds / runs;
  return result;
}

int cmd_calibrate(const CalibrateOptions& o) {
  if (o.runs == 0) throw UsageError("calibrate: --runs must be positive");
  const std::string stem = calibrate_stem(o);
  const std::string csv = out_path(o.out, stem + ".csv");
  const std::string summary_path = out_path(o.out, stem + "_summary.json");
  Manifest manifest("calibrate", config_json(o), o.seed, o.out, stem, {csv, summary_path});

  const CalibrationResult result = run_calibration(o);
  CsvTable table;
  table.header = {"run", "decision", "reason", "stop_round", "samples_used", "p_lower", "p_upper"};
  for (std::size_t i = 0; i < result.verdicts.size(); ++i) {
    const SafetyVerdict& v = result.verdicts[i];
    table.rows.push_back({std::to_string(i), std::string(to_string(v.decision)),
                          std::string(to_string(v.reason)), std::to_string(v.stop_round),
                          std::to_string(v.samples_used), format_double(v.lower_bound),
                          format_double(v.upper_bound)});
  }
  write_text_file(csv, write_csv(table));

  const CalibrationSummary& s = result.summary;
  json j = {{"runs", s.runs},
            {"safe", s.safe},
            {"unsafe", s.unsafe},
            {"safe_rate", s.safe_rate},
            {"unsafe_rate", s.unsafe_rate},
            {"false_safe_rate", s.false_safe_rate},
            {"false_unsafe_rate", s.false_unsafe_rate},
            {"mean_samples", s.mean_samples},
            {"mean_stop_round", s.mean_stop_round},
            {"p_star", s.p_star},
            {"p_dagger", s.p_dagger ? json(*s.p_dagger) : json(nullptr)},
            {"level", s.level ? json(*s.level) : json(nullptr)}};
  write_text_file(summary_path, j.dump(2) + "\n");

  std::cout << "safe " << s.safe << " unsafe " << s.unsafe << " false_safe_rate "
            << format_double(s.false_safe_rate) << " false_unsafe_rate "
            << format_double(s.false_unsafe_rate) << " mean_samples "
            << format_double(s.mean_samples) << "\n";
  manifest.finish();
  return kOk;
}

}  // namespace safegp::cli
