// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances below are fixed; do not loosen them to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include <safegp/safegp.hpp>
#include <safegp_cli/commands.hpp>

#include "oracles.hpp"

using namespace safegp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "safegp_acceptance";
  fs::create_directories(dir);
  return dir;
}

// 1. Monte-Carlo tail under the strong Borell bound, b1 <= b2.
Outcome bound_ordering() {
  constexpr std::size_t kSamples = 1'000'000;
  const Benchmark toy = toy_preset();
  const auto tp = GPModel::fit(toy.hyperparams, toy.training).posterior(toy.trajectory);
  const TailCurve curve = tail_curve_grid(tp, 20, 4.0, kSamples, 0);
  int bad = 0;
  double worst = -1.0;
  for (const TailPoint& p : curve.points) {
    const double slack = p.mc - (p.b1 + 3.0 * std::sqrt(p.b1 / static_cast<double>(kSamples)));
    worst = std::max(worst, slack);
    if (slack > 0.0 || p.b1 > p.b2) ++bad;
  }
  return {curve.points.size() == 20 && bad == 0,
          fmt("20 thresholds, %.0f violations, max(mc - allowance) = %.3g", bad, worst)};
}

cli::CalibrationSummary calibrate_via_command(cli::CalibrateOptions o) {
  o.out = (work_dir() / "calibrate").string();
  if (cli::cmd_calibrate(o) != cli::kOk) throw std::runtime_error("calibrate failed");
  const auto j = nlohmann::json::parse(read_text_file((fs::path(o.out) / (cli::calibrate_stem(o) + "_summary.json")).string()));
  cli::CalibrationSummary s;
  s.runs = j.at("runs");
  s.safe_rate = j.at("safe_rate");
  s.unsafe_rate = j.at("unsafe_rate");
  s.false_safe_rate = j.at("false_safe_rate");
  s.false_unsafe_rate = j.at("false_unsafe_rate");
  s.p_star = j.at("p_star");
  if (!j.at("p_dagger").is_null()) s.p_dagger = j.at("p_dagger").get<double>();
  return s;
}

// 2. AMC on Bernoulli indicator streams, both protected sides.
Outcome amc_calibration() {
  cli::CalibrateOptions o;
  o.method = Method::AMC;
  o.alpha = 0.01;
  o.epsilon = 0.05;
  o.rounds = 12;
  o.runs = 1000;
  o.process = cli::SyntheticProcess::Bernoulli;
  o.p_true = 0.02;
  const auto above = calibrate_via_command(o);
  o.p_true = 0.005;
  const auto below = calibrate_via_command(o);
  const double limit = 0.05 + 0.03;
  return {above.false_safe_rate <= limit && below.false_unsafe_rate <= limit && above.runs == 1000,
          fmt("false-Safe %.3f at p=0.02, false-Unsafe %.3f at p=0.005, limit %.2f", above.false_safe_rate,
              below.false_unsafe_rate, limit)};
}

// 3. AB on a centred Gaussian process with P-dagger just above alpha.
Outcome borell_calibration() {
  constexpr double kAlpha = 0.01;
  constexpr double kEps = 0.05;
  constexpr int kM = 10;
  constexpr double kEll = 0.25;
  // Independent median oracle: 1e6 maxima from a plain LLT sampler.
  const TrajectoryPosterior unit = cli::calibration_process(kM, kEll, 0.0);
  std::vector<double> maxima = oracle::gaussian_maxima(unit.covariance, 1'000'000, 777);
  std::nth_element(maxima.begin(), maxima.begin() + 499'999, maxima.end());
  const double median = maxima[499'999];
  const double level = median + oracle::phi_quantile(1.0 - 1.1 * kAlpha);
  const double p_dagger = 1.0 - oracle::phi_cdf(level - median);

  cli::CalibrateOptions o;
  o.method = Method::AB;
  o.alpha = kAlpha;
  o.epsilon = kEps;
  o.rounds = 12;
  o.runs = 500;
  o.process = cli::SyntheticProcess::Gaussian;
  o.m = kM;
  o.lengthscale = kEll;
  o.level = level;
  const auto s = calibrate_via_command(o);
  const bool premise = p_dagger >= kAlpha && s.p_dagger && *s.p_dagger >= kAlpha;
  return {premise && s.runs == 500 && s.safe_rate <= kEps + 0.03,
          fmt("P-dagger %.4f (tool %.4f), false-Safe %.3f, limit %.2f", p_dagger, s.p_dagger.value_or(-1.0),
              s.safe_rate, kEps + 0.03)};
}

// 4. Exact binomial tails against both exponential bounds.
Outcome okamoto_suite() {
  int checked = 0;
  int violations = 0;
  for (int a_milli : {100, 10}) {
    const double alpha = a_milli / 1000.0;
    for (int m : {10, 100, 1000}) {
      std::vector<double> pmf(m + 1);
      for (int k = 0; k <= m; ++k) pmf[k] = oracle::binom_pmf(m, k, alpha);
      for (int z_centi = 1; z_centi <= 50; ++z_centi) {
        const double z = z_centi / 100.0;
        // k/m <= alpha - z, in integer thousandths to keep the boundary exact.
        double lower = 0.0;
        for (int k = 0; k <= m; ++k)
          if (1000LL * k <= static_cast<long long>(m) * (a_milli - 10 * z_centi)) lower += pmf[k];
        // k/m > (sqrt(alpha) + z)^2; boundary ties counted in, which only makes the check stricter.
        const double cut = std::pow(std::sqrt(alpha) + z, 2);
        double upper = 0.0;
        for (int k = 0; k <= m; ++k)
          if (static_cast<double>(k) / m > cut - 1e-12) upper += pmf[k];
        const double lower_bound = std::exp(-m * z * z / (2.0 * alpha * (1.0 - alpha)));
        const double upper_bound = std::exp(-2.0 * m * z * z);
        checked += 2;
        violations += lower > lower_bound;
        violations += upper > upper_bound;
      }
    }
  }
  return {violations == 0, fmt("%.0f tail checks, %.0f violations", checked, violations)};
}

// 5. Order-statistic median interval coverage.
Outcome median_coverage() {
  constexpr std::size_t kM = 1000;
  constexpr int kTrials = 5000;
  const auto lv = median_quantile_levels(kM, 1, 0.05);
  if (!lv) return {false, "levels undefined at M = 1000"};
  const double chi = median_confidence(1, 0.05);
  std::mt19937_64 eng(20);
  std::normal_distribution<double> nd;
  std::vector<double> v(kM);
  int covered = 0;
  int below = 0;
  int above = 0;
  for (int t = 0; t < kTrials; ++t) {
    for (double& x : v) x = nd(eng);
    const double lo = oracle::order_stat(v, lv->lower);
    const double hi = oracle::order_stat(v, lv->upper);
    covered += lo <= 0.0 && 0.0 <= hi;
    below += lo <= 0.0;
    above += 0.0 <= hi;
  }
  const double rate = static_cast<double>(covered) / kTrials;
  // Each side alone is held to chi; both together can only be expected near 2 chi - 1.
  return {rate >= chi - 0.02,
          fmt("coverage %.4f (floor %.4f), one-sided %.4f / %.4f", rate, chi - 0.02,
              static_cast<double>(below) / kTrials, static_cast<double>(above) / kTrials) +
              fmt(", chi %.4f, 2 chi - 1 = %.4f", chi, 2.0 * chi - 1.0)};
}

struct SalStats {
  double n_sal = 0.0;
  double c_h = 0.0;
  double n_f = 0.0;
  int unsafe_measured = 0;
  double seconds = 0.0;
};

// 6 and 7 share these runs.
SalStats sal_runs(Method method) {
  constexpr int kSeeds = 10;
  const Benchmark bench = himmelblau_preset();
  SalStats s;
  const auto t0 = std::chrono::steady_clock::now();
  for (int seed = 0; seed < kSeeds; ++seed) {
    SALConfig cfg;
    cfg.decider.method = method;
    cfg.decider.alpha = 0.01;
    cfg.decider.epsilon = 0.05;
    cfg.decider.schedule.rounds = 10;
    cfg.domain = bench.domain;
    cfg.m = bench.discretization;
    cfg.candidate_count = 20;
    cfg.total_sample_budget = 5'000'000;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const SALResult r = run_sal(bench, cfg, initial_dataset(bench, 5, 0.25, cfg.seed));
    s.n_sal += static_cast<double>(r.n_sal) / kSeeds;
    s.c_h += r.final_health_coverage / kSeeds;
    s.n_f += static_cast<double>(r.n_f) / kSeeds;
    for (const ExperimentRecord& rec : r.records)
      if (rec.measured && !(rec.verdict && rec.verdict->safe())) ++s.unsafe_measured;
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

// 8. Factorised posterior against an explicit inverse.
Outcome gp_oracle() {
  std::mt19937_64 eng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.3, 2.0);
  std::uniform_real_distribution<double> noise(1e-3, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = trial % 4;
    const int d = 1 + (trial / 4) % 3;
    Hyperparams theta{pos(eng), Eigen::VectorXd(d), noise(eng)};
    for (int k = 0; k < d; ++k) theta.lengthscales(k) = pos(eng);
    Dataset data;
    data.inputs.resize(n, d);
    data.outputs.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) data.inputs(i, k) = u(eng);
      data.outputs(i) = u(eng);
    }
    Eigen::MatrixXd q(1 + trial % 5, d);
    for (Eigen::Index i = 0; i < q.rows(); ++i)
      for (int k = 0; k < d; ++k) q(i, k) = u(eng);
    const double prior = u(eng);
    const TrajectoryPosterior tp = GPModel::fit(theta, data, prior).posterior(q);
    const auto ref = oracle::brute_posterior(data.inputs, data.outputs, prior, theta.signal_variance,
                                             theta.lengthscales, theta.noise_variance, q);
    worst = std::max({worst, (tp.mean - ref.mean).cwiseAbs().maxCoeff(), (tp.covariance - ref.cov).cwiseAbs().maxCoeff()});
  }
  return {worst <= 1e-10, fmt("1000 cases, max abs difference %.3g", worst)};
}

}  // namespace

int main() {
  int failed = 0;
  // limit: wall-clock ceiling in seconds, 0 for none.
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check, double limit = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0.0 && s > limit) {
      o.pass = false;
      o.detail += fmt(" (over the %.0fs limit)", limit);
    }
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  };

  report(1, "bound-ordering", bound_ordering, 120.0);
  report(2, "amc-calibration", amc_calibration, 300.0);
  report(3, "borell-calibration", borell_calibration);
  report(4, "okamoto-oracle", okamoto_suite);
  report(5, "median-coverage", median_coverage);

  SalStats mc, amc, ab;
  bool sal_ok = true;
  std::string sal_error;
  try {
    mc = sal_runs(Method::MC);
    amc = sal_runs(Method::AMC);
    ab = sal_runs(Method::AB);
  } catch (const std::exception& e) {
    sal_ok = false;
    sal_error = e.what();
  }
  report(6, "sample-efficiency", [&]() -> Outcome {
    if (!sal_ok) return {false, "exception: " + sal_error};
    const double total = mc.seconds + amc.seconds + ab.seconds;
    const bool order = ab.n_sal > amc.n_sal && amc.n_sal > mc.n_sal && ab.c_h > mc.c_h;
    return {order && total <= 1800.0,
            fmt("n_SAL AB %.1f > AMC %.1f > MC %.1f", ab.n_sal, amc.n_sal, mc.n_sal) +
                fmt(", c_h AB %.3f vs MC %.3f, %.0fs", ab.c_h, mc.c_h, total)};
  });
  report(7, "safety-audit", [&]() -> Outcome {
    if (!sal_ok) return {false, "exception: " + sal_error};
    const int unsafe = mc.unsafe_measured + amc.unsafe_measured + ab.unsafe_measured;
    const double worst_nf = std::max({mc.n_f, amc.n_f, ab.n_f});
    return {unsafe == 0 && worst_nf <= 1.0,
            fmt("%.0f measurements without a Safe verdict, mean n_f MC %.2f AMC %.2f AB %.2f", unsafe, mc.n_f,
                amc.n_f, ab.n_f)};
  });
  report(8, "gp-oracle", gp_oracle);

  std::printf("%s: %d of 8 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
