#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jdbench/common.hpp"
#include "jdbench/metrics.hpp"

namespace jdbench {

// One line of a scores file.
struct ScoreRow {
  std::string method_id;
  Strategy strategy = Strategy::Simple;
  bool masked = false;
  MetricVector metrics;

  std::string key() const { return prompt_key(strategy, masked); }
};

nlohmann::ordered_json to_json(const ScoreRow& row);
ScoreRow score_row_from_json(const nlohmann::json& j);
std::string write_scores_jsonl(const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> read_scores_jsonl(const std::string& path);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator; 0 for a single sample
  double median = 0.0;
};

// Throws std::invalid_argument on an empty sample.
SampleSummary summarize(const std::vector<double>& samples);

struct AggregateRow {
  std::string prompt_key;
  std::string metric_name;
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  bool best = false;
};

// Rows ordered by prompt key, then metric in table order. Metrics with no
// values for a prompt are skipped and noted in `warnings`. Per metric the row
// with the highest mean is marked best; ties go to the lower std, then to the
// smaller prompt key.
std::vector<AggregateRow> aggregate(const std::vector<ScoreRow>& scores,
                                    std::vector<std::string>* warnings = nullptr);

// Samples of one metric for one prompt key, in scores order.
std::vector<double> metric_samples(const std::vector<ScoreRow>& scores, const std::string& prompt_key,
                                   std::string_view metric);

enum class TestKind { TOneSided, KsOneSided };

struct TestResult {
  TestKind kind = TestKind::TOneSided;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double df = 0.0;  // Welch-Satterthwaite degrees of freedom; t-test only
};

// I_x(a, b), accurate to about 1e-14 for the arguments used here.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

// Welch's unpaired t-test against the alternative mean(a) > mean(b).
// Throws DataError when either sample has fewer than two values. With zero
// variance on both sides the p-value is 0, 0.5 or 1 by the sign of the mean difference.
TestResult t_test_one_sided(const std::vector<double>& a, const std::vector<double>& b);

// One-sided two-sample KS test against the alternative that a is
// stochastically greater than b, with the asymptotic p-value exp(-2 m D+^2).
// Throws DataError on an empty sample.
TestResult ks_test_one_sided(const std::vector<double>& a, const std::vector<double>& b);

struct WinnerDistribution {
  std::string metric_name;
  std::map<std::string, std::size_t> counts;  // prompt key -> strict wins
  std::size_t ties = 0;
  std::size_t methods = 0;   // methods that took part
  std::size_t excluded = 0;  // methods missing a score for some prompt
};

// Compares `prompt_keys` (all keys present when empty) per method. A method
// with an exact tie at the top counts toward `ties` only.
WinnerDistribution winner_distribution(const std::vector<ScoreRow>& scores, std::string_view metric,
                                       std::vector<std::string> prompt_keys = {});

struct PairwiseTest {
  std::string candidate_key;
  std::string baseline_key;
  std::string metric_name;
  std::optional<TestResult> t_test;
  std::optional<TestResult> ks_test;
};

// Candidate against baseline for every metric; tests are absent when either
// side has fewer than two values for that metric.
std::vector<PairwiseTest> compare_prompts(const std::vector<ScoreRow>& scores,
                                          const std::string& candidate_key,
                                          const std::string& baseline_key);

// Unmasked (as a) against masked (as b) for each metric of one strategy.
std::vector<PairwiseTest> masking_effect(const std::vector<ScoreRow>& scores, Strategy strategy);

}  // namespace jdbench
