#include <cctype>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "safegp_cli/commands.hpp"

namespace safegp::cli {
namespace {

struct ConfigFile {
  std::string command;  // empty if the file does not name one
  std::map<std::string, std::string> values;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Accepts a run manifest ({"command", "config": {...}}), a flat JSON object,
// or key = value lines with # comments.
ConfigFile load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  ConfigFile cfg;
  const std::string head = trim(text);
  if (!head.empty() && head.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    if (doc.contains("command")) cfg.command = doc.at("command").get<std::string>();
    const nlohmann::json& body = doc.contains("config") ? doc.at("config") : doc;
    for (const auto& [key, value] : body.items()) {
      if (key == "command") continue;
      if (value.is_null()) continue;
      cfg.values[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return cfg;
  }
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config: line " + std::to_string(line_no) + " is not key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "command") {
      cfg.command = value;
    } else {
      cfg.values[key] = value;
    }
  }
  return cfg;
}

bool is_command(const std::string& s) {
  return s == "compare-bounds" || s == "run-sal" || s == "calibrate";
}

// Splices config values in as --key=value right after the subcommand, so that
// explicit flags given later on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return rest;

  const ConfigFile cfg = load_config(*config_path);
  auto cmd = std::find_if(rest.begin(), rest.end(), is_command);
  if (cmd == rest.end()) {
    if (cfg.command.empty()) throw UsageError("--config: no subcommand given or named in the file");
    if (!is_command(cfg.command)) throw UsageError("--config: unknown command '" + cfg.command + "'");
    rest.insert(rest.begin(), cfg.command);
    cmd = rest.begin();
  } else if (!cfg.command.empty() && cfg.command != *cmd) {
    throw UsageError("--config: file is for '" + cfg.command + "', not '" + *cmd + "'");
  }
  std::vector<std::string> spliced;
  for (const auto& [key, value] : cfg.values) spliced.push_back("--" + key + "=" + value);
  rest.insert(cmd + 1, spliced.begin(), spliced.end());
  return rest;
}

Method method_from(const std::string& s) {
  try {
    return parse_method(s);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  try {
    std::vector<std::string> args = expand_config(raw_args);

    CLI::App app{"Safety decisions for Gaussian-process trajectories"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(safegp::version()));
    app.add_option("--config", "Key=value or JSON file (a run manifest also works)");

    CompareBoundsOptions cb;
    auto* compare = app.add_subcommand("compare-bounds", "Monte-Carlo tail versus Borell-TIS bounds");
    compare->add_option("--preset", cb.preset, "Preset with a fixed trajectory")->capture_default_str();
    compare->add_option("--samples", cb.samples, "Monte-Carlo draws")->capture_default_str();
    compare->add_option("--grid", cb.grid, "Threshold grid points")->capture_default_str();
    compare->add_option("--span", cb.span, "Grid width in units of sigma_tilde")->capture_default_str();
    compare->add_option("--seed", cb.seed)->capture_default_str();
    compare->add_option("--out", cb.out, "Output directory")->capture_default_str();

    RunSalOptions rs;
    std::string rs_method = "ABM";
    auto* sal = app.add_subcommand("run-sal", "Safe active learning on a benchmark");
    sal->add_option("--preset", rs.preset)->capture_default_str();
    sal->add_option("--method", rs_method, "MC, AMC, AB or ABM")->capture_default_str();
    sal->add_option("--alpha", rs.alpha)->capture_default_str();
    sal->add_option("--epsilon", rs.epsilon)->capture_default_str();
    sal->add_option("--rounds", rs.rounds, "R, number of sampling rounds")->capture_default_str();
    sal->add_option("--budget", rs.budget, "Total trajectory draws")->capture_default_str();
    sal->add_option("--seed", rs.seed)->capture_default_str();
    sal->add_option("--m", rs.m, "Points per trajectory (0: preset)")->capture_default_str();
    sal->add_option("--candidates", rs.candidates)->capture_default_str();
    sal->add_option("--initial", rs.initial, "Initial data points")->capture_default_str();
    sal->add_option("--initial-radius", rs.initial_radius)->capture_default_str();
    sal->add_option("--max-retries", rs.max_retries)->capture_default_str();
    sal->add_option("--out", rs.out, "Output directory")->capture_default_str();

    CalibrateOptions cal;
    std::string cal_method = "AMC";
    std::string cal_process = "bernoulli";
    double cal_level = 0.0;
    auto* calib = app.add_subcommand("calibrate", "Error rates against a process with known P*");
    calib->add_option("--method", cal_method)->capture_default_str();
    calib->add_option("--alpha", cal.alpha)->capture_default_str();
    calib->add_option("--epsilon", cal.epsilon)->capture_default_str();
    calib->add_option("--rounds", cal.rounds)->capture_default_str();
    calib->add_option("--p-true", cal.p_true)->capture_default_str();
    calib->add_option("--runs", cal.runs)->capture_default_str();
    calib->add_option("--seed", cal.seed)->capture_default_str();
    calib->add_option("--process", cal_process, "bernoulli or gaussian")->capture_default_str();
    calib->add_option("--m", cal.m, "Gaussian process points")->capture_default_str();
    calib->add_option("--lengthscale", cal.lengthscale)->capture_default_str();
    auto* level_opt = calib->add_option("--level", cal_level, "Gaussian mean level (overrides --p-true)");
    calib->add_option("--oracle-samples", cal.oracle_samples)->capture_default_str();
    calib->add_option("--out", cal.out, "Output directory")->capture_default_str();

    try {
      // CLI11 parses a reversed argument vector.
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kOk : kUsage;
    }

    if (compare->parsed()) return cmd_compare_bounds(cb);
    if (sal->parsed()) {
      rs.method = method_from(rs_method);
      return cmd_run_sal(rs);
    }
    cal.method = method_from(cal_method);
    if (cal_process == "bernoulli") {
      cal.process = SyntheticProcess::Bernoulli;
    } else if (cal_process == "gaussian") {
      cal.process = SyntheticProcess::Gaussian;
    } else {
      throw UsageError("calibrate: unknown --process '" + cal_process + "'");
    }
    if (level_opt->count() > 0) cal.level = cal_level;
    return cmd_calibrate(cal);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace safegp::cli
