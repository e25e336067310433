#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "jdbench/stats.hpp"

namespace jdbench {

struct Report {
  std::vector<AggregateRow> aggregates;
  std::vector<PairwiseTest> comparisons;  // candidate vs baseline
  std::vector<WinnerDistribution> winners;
  std::vector<PairwiseTest> masking;  // candidate = unmasked, baseline = masked
  std::vector<std::string> warnings;
};

struct ReportOptions {
  std::vector<std::pair<std::string, std::string>> comparisons;  // (candidate, baseline) keys
  std::vector<Strategy> masking_strategies;  // strategies with both masked and unmasked runs
  std::vector<std::string> winner_keys;      // empty: every prompt key present
};

Report build_report(const std::vector<ScoreRow>& scores, const ReportOptions& options);

// Rounds half-up to two decimals: 0.005 -> "0.01".
std::string format_fixed2(double value);
// "0.61(0.08)"
std::string format_mean_std(double mean, double std);

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

std::string render_markdown(const Report& report);
std::string render_csv(const Report& report);
std::string render_json(const Report& report);

}  // namespace jdbench
