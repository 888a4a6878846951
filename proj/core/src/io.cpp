#include "safegp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "safegp/errors.hpp"

namespace safegp {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n\r") != std::string::npos) {
      throw InputError("csv: cell contains a reserved character");
    }
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string fmt_size(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string write_csv(const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw InputError("csv: row width differs from header");
    append_row(out, row);
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) throw InputError("csv: row width differs from header");
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

namespace {

json verdict_json(const SafetyVerdict& v) {
  return json{{"method", to_string(v.method)},
              {"decision", to_string(v.decision)},
              {"reason", to_string(v.reason)},
              {"stop_round", v.stop_round},
              {"samples_used", v.samples_used},
              {"p_lower", v.lower_bound},
              {"p_upper", v.upper_bound},
              {"alpha", v.alpha},
              {"epsilon", v.epsilon}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string verdict_to_json(const SafetyVerdict& verdict) { return verdict_json(verdict).dump(); }

SafetyVerdict verdict_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    SafetyVerdict v;
    v.method = parse_method(j.at("method").get<std::string>());
    v.decision = parse_decision(j.at("decision").get<std::string>());
    v.reason = parse_reason(j.at("reason").get<std::string>());
    v.stop_round = j.at("stop_round").get<int>();
    v.samples_used = j.at("samples_used").get<std::size_t>();
    v.lower_bound = j.at("p_lower").get<double>();
    v.upper_bound = j.at("p_upper").get<double>();
    v.alpha = j.at("alpha").get<double>();
    v.epsilon = j.at("epsilon").get<double>();
    return v;
  } catch (const json::exception& e) {
    throw InputError(std::string("verdict json: ") + e.what());
  }
}

CsvTable records_table(const std::vector<ExperimentRecord>& records) {
  CsvTable table;
  table.header = {"iteration", "measured", "start", "end", "decision", "reason", "stop_round",
                  "p_lower", "p_upper", "acquisition_sigma", "candidates_evaluated",
                  "sign_change_rejections", "best_penalty", "samples", "cumulative_samples",
                  "training_size", "unsafe_measurements", "rmse", "c_h"};
  auto point = [](const Eigen::VectorXd& x) {
    std::string s;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (k > 0) s += ' ';
      s += format_double(x(k));
    }
    return s;
  };
  for (const auto& r : records) {
    std::vector<std::string> row;
    row.push_back(fmt_size(r.iteration));
    row.push_back(r.measured ? "1" : "0");
    row.push_back(r.trajectory ? point(r.trajectory->start) : "");
    row.push_back(r.trajectory ? point(r.trajectory->end) : "");
    row.emplace_back(r.verdict ? to_string(r.verdict->decision) : "");
    row.emplace_back(r.verdict ? to_string(r.verdict->reason) : "");
    row.push_back(r.verdict ? std::to_string(r.verdict->stop_round) : "");
    row.push_back(r.verdict ? format_double(r.verdict->lower_bound) : "");
    row.push_back(r.verdict ? format_double(r.verdict->upper_bound) : "");
    row.push_back(format_double(r.acquisition_sigma));
    row.push_back(fmt_size(r.candidates_evaluated));
    row.push_back(fmt_size(r.sign_change_rejections));
    row.push_back(r.best_penalty ? format_double(*r.best_penalty) : "");
    row.push_back(fmt_size(r.samples));
    row.push_back(fmt_size(r.cumulative_samples));
    row.push_back(fmt_size(r.training_size));
    row.push_back(fmt_size(r.unsafe_measurements));
    row.push_back(format_double(r.rmse));
    row.push_back(format_double(r.health_coverage));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string records_jsonl(const std::vector<ExperimentRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json j{{"iteration", r.iteration},
           {"measured", r.measured},
           {"acquisition_sigma", r.acquisition_sigma},
           {"candidates_evaluated", r.candidates_evaluated},
           {"sign_change_rejections", r.sign_change_rejections},
           {"samples", r.samples},
           {"cumulative_samples", r.cumulative_samples},
           {"training_size", r.training_size},
           {"unsafe_measurements", r.unsafe_measurements},
           {"rmse", r.rmse},
           {"c_h", r.health_coverage}};
    j["best_penalty"] = r.best_penalty ? json(*r.best_penalty) : json(nullptr);
    j["verdict"] = r.verdict ? verdict_json(*r.verdict) : json(nullptr);
    j["trajectory"] = r.trajectory ? matrix_json(r.trajectory->points) : json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string sal_summary_json(const SALResult& result) {
  json j{{"n_SAL", result.n_sal},
         {"final_rmse", result.final_rmse},
         {"final_c_h", result.final_health_coverage},
         {"n_f", result.n_f},
         {"samples_used", result.samples_used},
         {"iterations", result.records.size()},
         {"budget_exhausted", result.budget_exhausted}};
  return j.dump(2) + "\n";
}

CsvTable tail_curve_table(const TailCurve& curve) {
  CsvTable table;
  table.header = {"x", "mc", "b1", "b2", "b3"};
  for (const auto& p : curve.points) {
    table.rows.push_back({format_double(p.threshold), format_double(p.mc), format_double(p.b1),
                          format_double(p.b2), format_double(p.b3)});
  }
  return table;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace safegp
