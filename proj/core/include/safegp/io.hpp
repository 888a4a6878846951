#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "safegp/active_learning.hpp"
#include "safegp/deciders.hpp"
#include "safegp/tail_curve.hpp"

namespace safegp {

/// Header plus rows of unquoted cells. Cells must not contain commas, quotes
/// or newlines; everything this library writes satisfies that.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string write_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// {method, decision, reason, stop_round, samples_used, p_lower, p_upper, alpha, epsilon}
std::string verdict_to_json(const SafetyVerdict& verdict);
SafetyVerdict verdict_from_json(std::string_view text);

CsvTable records_table(const std::vector<ExperimentRecord>& records);
/// One JSON object per line, including the chosen trajectory's points.
std::string records_jsonl(const std::vector<ExperimentRecord>& records);
/// {n_SAL, final_rmse, final_c_h, n_f, samples_used, iterations, budget_exhausted}
std::string sal_summary_json(const SALResult& result);

/// Columns x, mc, b1, b2, b3.
CsvTable tail_curve_table(const TailCurve& curve);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace safegp
