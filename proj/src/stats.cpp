#include "jdbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace jdbench {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const ScoreRow& row) {
  ordered_json j;
  j["method_id"] = row.method_id;
  j["strategy"] = std::string(strategy_name(row.strategy));
  j["masked"] = row.masked;
  j["prompt_key"] = row.key();
  j["metrics"] = to_json(row.metrics);
  return j;
}

ScoreRow score_row_from_json(const json& j) {
  ScoreRow row;
  row.method_id = j.at("method_id").get<std::string>();
  auto s = parse_strategy(j.at("strategy").get<std::string>());
  if (!s) throw DataError("unknown strategy in scores: " + j.at("strategy").dump());
  row.strategy = *s;
  row.masked = j.at("masked").get<bool>();
  row.metrics = metric_vector_from_json(j.at("metrics"));
  return row;
}

std::string write_scores_jsonl(const std::vector<ScoreRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<ScoreRow> read_scores_jsonl(const std::string& path) {
  std::vector<ScoreRow> rows;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    try {
      rows.push_back(score_row_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(path + ": malformed score on line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

SampleSummary summarize(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  // Sorting first makes the floating-point sums independent of input order.
  std::vector<double> v = samples;
  std::sort(v.begin(), v.end());
  SampleSummary s;
  s.n = v.size();
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  // All-equal samples get exactly zero spread.
  if (v.front() == v.back()) s.std = 0.0;
  const auto mid = v.size() / 2;
  s.median = v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
  return s;
}

std::vector<double> metric_samples(const std::vector<ScoreRow>& scores, const std::string& key,
                                   std::string_view metric) {
  std::vector<double> out;
  for (const auto& row : scores) {
    if (row.key() != key) continue;
    if (auto v = metric_value(row.metrics, metric)) out.push_back(*v);
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<ScoreRow>& scores,
                                    std::vector<std::string>* warnings) {
  std::set<std::string> keys;
  for (const auto& row : scores) keys.insert(row.key());

  std::vector<AggregateRow> rows;
  std::map<std::string, std::vector<std::string>> missing;  // metric -> keys without values
  for (const auto& key : keys) {
    for (auto metric : kMetricNames) {
      auto samples = metric_samples(scores, key, metric);
      if (samples.empty()) {
        missing[std::string(metric)].push_back(key);
        continue;
      }
      auto s = summarize(samples);
      rows.push_back({key, std::string(metric), s.n, s.mean, s.std, s.median, false});
    }
  }
  if (warnings) {
    for (auto metric : kMetricNames) {
      auto it = missing.find(std::string(metric));
      if (it == missing.end()) continue;
      if (it->second.size() == keys.size()) {
        warnings->push_back("no values for " + it->first + " under any prompt");
      } else {
        for (const auto& key : it->second) warnings->push_back("no values for " + it->first + " under " + key);
      }
    }
  }

  for (auto metric : kMetricNames) {
    AggregateRow* best = nullptr;
    for (auto& r : rows) {
      if (r.metric_name != metric) continue;
      if (!best || r.mean > best->mean || (r.mean == best->mean && r.std < best->std) ||
          (r.mean == best->mean && r.std == best->std && r.prompt_key < best->prompt_key)) {
        best = &r;
      }
    }
    if (best) best->best = true;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Distributions

namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

TestResult t_test_one_sided(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw DataError("t-test needs at least two samples per side");
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  TestResult r;
  r.kind = TestKind::TOneSided;
  r.n_a = a.size();
  r.n_b = b.size();
  const double va = sa.std * sa.std / static_cast<double>(r.n_a);
  const double vb = sb.std * sb.std / static_cast<double>(r.n_b);
  if (va + vb == 0.0) {
    const double diff = sa.mean - sb.mean;
    r.statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                           : diff < 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    // Equal constants sit exactly at the null, like t = 0 in the regular case.
    r.p_value = diff > 0 ? 0.0 : diff < 0 ? 1.0 : 0.5;
    return r;
  }
  r.statistic = (sa.mean - sb.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(r.n_a - 1) + vb * vb / static_cast<double>(r.n_b - 1));
  // Upper tail directly rather than 1 - CDF, so small p-values keep their precision.
  if (r.statistic == 0.0) {
    r.p_value = 0.5;
  } else {
    const double half_tail =
        0.5 * regularized_incomplete_beta(r.df / 2.0, 0.5, r.df / (r.df + r.statistic * r.statistic));
    r.p_value = r.statistic > 0 ? half_tail : 1.0 - half_tail;
  }
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  return r;
}

TestResult ks_test_one_sided(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DataError("KS test needs non-empty samples");
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  auto ecdf = [](const std::vector<double>& sorted, double x) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
  };
  double d = 0.0;
  for (const auto* sample : {&sa, &sb}) {
    for (double x : *sample) d = std::max(d, ecdf(sb, x) / nb - ecdf(sa, x) / na);
  }
  TestResult r;
  r.kind = TestKind::KsOneSided;
  r.statistic = d;
  r.n_a = sa.size();
  r.n_b = sb.size();
  const double m = na * nb / (na + nb);
  r.p_value = d == 0.0 ? 1.0 : std::clamp(std::exp(-2.0 * m * d * d), 0.0, 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// Comparisons

WinnerDistribution winner_distribution(const std::vector<ScoreRow>& scores, std::string_view metric,
                                       std::vector<std::string> prompt_keys) {
  if (prompt_keys.empty()) {
    std::set<std::string> keys;
    for (const auto& row : scores) keys.insert(row.key());
    prompt_keys.assign(keys.begin(), keys.end());
  }
  std::map<std::string, std::map<std::string, double>> by_method;
  std::set<std::string> methods;
  const std::set<std::string> wanted(prompt_keys.begin(), prompt_keys.end());
  for (const auto& row : scores) {
    if (!wanted.count(row.key())) continue;
    methods.insert(row.method_id);
    auto v = metric_value(row.metrics, metric);
    if (!v) continue;
    if (!by_method[row.method_id].emplace(row.key(), *v).second) {
      throw DataError("duplicate score for " + row.method_id + " under " + row.key());
    }
  }

  WinnerDistribution out;
  out.metric_name = std::string(metric);
  for (const auto& id : methods) {
    auto it = by_method.find(id);
    if (it == by_method.end() || it->second.size() != wanted.size()) {
      ++out.excluded;
      continue;
    }
    ++out.methods;
    double top = -std::numeric_limits<double>::infinity();
    std::size_t at_top = 0;
    const std::string* winner = nullptr;
    for (const auto& [key, v] : it->second) {
      if (v > top) {
        top = v;
        at_top = 1;
        winner = &key;
      } else if (v == top) {
        ++at_top;
      }
    }
    if (at_top == 1) {
      ++out.counts[*winner];
    } else {
      ++out.ties;
    }
  }
  return out;
}

std::vector<PairwiseTest> compare_prompts(const std::vector<ScoreRow>& scores,
                                          const std::string& candidate_key,
                                          const std::string& baseline_key) {
  std::vector<PairwiseTest> out;
  for (auto metric : kMetricNames) {
    PairwiseTest t{candidate_key, baseline_key, std::string(metric), std::nullopt, std::nullopt};
    auto a = metric_samples(scores, candidate_key, metric);
    auto b = metric_samples(scores, baseline_key, metric);
    if (a.size() >= 2 && b.size() >= 2) {
      t.t_test = t_test_one_sided(a, b);
      t.ks_test = ks_test_one_sided(a, b);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PairwiseTest> masking_effect(const std::vector<ScoreRow>& scores, Strategy strategy) {
  return compare_prompts(scores, prompt_key(strategy, false), prompt_key(strategy, true));
}

}  // namespace jdbench
