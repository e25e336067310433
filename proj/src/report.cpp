#include "jdbench/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace jdbench {

using nlohmann::json;
using nlohmann::ordered_json;

Report build_report(const std::vector<ScoreRow>& scores, const ReportOptions& options) {
  Report r;
  r.aggregates = aggregate(scores, &r.warnings);
  for (const auto& [cand, base] : options.comparisons) {
    auto tests = compare_prompts(scores, cand, base);
    r.comparisons.insert(r.comparisons.end(), tests.begin(), tests.end());
  }
  for (auto metric : kMetricNames) {
    auto w = winner_distribution(scores, metric, options.winner_keys);
    if (w.excluded > 0 && w.methods > 0) {
      r.warnings.push_back(std::to_string(w.excluded) + " methods without a complete " +
                           std::string(metric) + " score set left out of the winner count");
    }
    r.winners.push_back(std::move(w));
  }
  for (auto s : options.masking_strategies) {
    auto tests = masking_effect(scores, s);
    r.masking.insert(r.masking.end(), tests.begin(), tests.end());
  }
  return r;
}

std::string format_fixed2(double value) {
  // The epsilon absorbs binary representation error so that 0.005 rounds up.
  const double cents = std::floor(std::fabs(value) * 100.0 + 0.5 + 1e-9);
  const auto whole = static_cast<long long>(cents) / 100;
  const auto frac = static_cast<long long>(cents) % 100;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", value < 0 && cents > 0 ? "-" : "", whole, frac);
  return buf;
}

std::string format_mean_std(double mean, double std) {
  return format_fixed2(mean) + "(" + format_fixed2(std) + ")";
}

// ---------------------------------------------------------------------------
// JSON

namespace {

// JSON has no infinities; the degenerate t-test reports them as strings.
ordered_json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DataError("not a number: " + s);
  }
  return j.get<double>();
}

std::string_view kind_name(TestKind k) { return k == TestKind::TOneSided ? "t_one_sided" : "ks_one_sided"; }

ordered_json test_json(const std::optional<TestResult>& t) {
  if (!t) return nullptr;
  ordered_json j;
  j["test_kind"] = std::string(kind_name(t->kind));
  j["statistic"] = number_json(t->statistic);
  j["p_value"] = number_json(t->p_value);
  j["n_a"] = t->n_a;
  j["n_b"] = t->n_b;
  if (t->kind == TestKind::TOneSided) j["df"] = number_json(t->df);
  return j;
}

std::optional<TestResult> test_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  TestResult t;
  const auto kind = j.at("test_kind").get<std::string>();
  if (kind == "t_one_sided") {
    t.kind = TestKind::TOneSided;
    t.df = number_from_json(j.at("df"));
  } else if (kind == "ks_one_sided") {
    t.kind = TestKind::KsOneSided;
  } else {
    throw DataError("unknown test kind: " + kind);
  }
  t.statistic = number_from_json(j.at("statistic"));
  t.p_value = number_from_json(j.at("p_value"));
  t.n_a = j.at("n_a").get<std::size_t>();
  t.n_b = j.at("n_b").get<std::size_t>();
  return t;
}

ordered_json pairwise_json(const PairwiseTest& p) {
  ordered_json j;
  j["candidate"] = p.candidate_key;
  j["baseline"] = p.baseline_key;
  j["metric"] = p.metric_name;
  j["t_test"] = test_json(p.t_test);
  j["ks_test"] = test_json(p.ks_test);
  return j;
}

PairwiseTest pairwise_from_json(const json& j) {
  return {j.at("candidate").get<std::string>(), j.at("baseline").get<std::string>(),
          j.at("metric").get<std::string>(), test_from_json(j.at("t_test")),
          test_from_json(j.at("ks_test"))};
}

}  // namespace

ordered_json to_json(const Report& report) {
  ordered_json j;
  j["aggregates"] = ordered_json::array();
  for (const auto& a : report.aggregates) {
    ordered_json row;
    row["prompt_key"] = a.prompt_key;
    row["metric"] = a.metric_name;
    row["n"] = a.n;
    row["mean"] = a.mean;
    row["std"] = a.std;
    row["median"] = a.median;
    row["best"] = a.best;
    row["cell"] = format_mean_std(a.mean, a.std);
    j["aggregates"].push_back(std::move(row));
  }
  j["comparisons"] = ordered_json::array();
  for (const auto& p : report.comparisons) j["comparisons"].push_back(pairwise_json(p));
  j["winners"] = ordered_json::array();
  for (const auto& w : report.winners) {
    ordered_json row;
    row["metric"] = w.metric_name;
    row["counts"] = ordered_json::object();
    for (const auto& [k, c] : w.counts) row["counts"][k] = c;
    row["ties"] = w.ties;
    row["methods"] = w.methods;
    row["excluded"] = w.excluded;
    j["winners"].push_back(std::move(row));
  }
  j["masking_effect"] = ordered_json::array();
  for (const auto& p : report.masking) j["masking_effect"].push_back(pairwise_json(p));
  j["warnings"] = report.warnings;
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  for (const auto& row : j.at("aggregates")) {
    AggregateRow a;
    a.prompt_key = row.at("prompt_key").get<std::string>();
    a.metric_name = row.at("metric").get<std::string>();
    a.n = row.at("n").get<std::size_t>();
    a.mean = row.at("mean").get<double>();
    a.std = row.at("std").get<double>();
    a.median = row.at("median").get<double>();
    a.best = row.at("best").get<bool>();
    r.aggregates.push_back(std::move(a));
  }
  for (const auto& p : j.at("comparisons")) r.comparisons.push_back(pairwise_from_json(p));
  for (const auto& row : j.at("winners")) {
    WinnerDistribution w;
    w.metric_name = row.at("metric").get<std::string>();
    for (const auto& [k, c] : row.at("counts").items()) w.counts[k] = c.get<std::size_t>();
    w.ties = row.at("ties").get<std::size_t>();
    w.methods = row.at("methods").get<std::size_t>();
    w.excluded = row.at("excluded").get<std::size_t>();
    r.winners.push_back(std::move(w));
  }
  for (const auto& p : j.at("masking_effect")) r.masking.push_back(pairwise_from_json(p));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string render_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Markdown and CSV

namespace {

std::string fmt4(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt_g(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> prompt_keys_in_order(const Report& report) {
  std::vector<std::string> keys;
  for (const auto& a : report.aggregates) {
    if (keys.empty() || keys.back() != a.prompt_key) keys.push_back(a.prompt_key);
  }
  return keys;
}

void tests_table(std::ostringstream& md, const std::vector<PairwiseTest>& tests,
                 const char* first_col, const char* second_col) {
  md << "| " << first_col << " | " << second_col
     << " | metric | t | p (t-test) | D+ | p (KS) |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& p : tests) {
    md << "| " << p.candidate_key << " | " << p.baseline_key << " | " << p.metric_name << " | ";
    if (p.t_test && p.ks_test) {
      md << fmt4(p.t_test->statistic) << " | " << fmt4(p.t_test->p_value) << " | "
         << fmt4(p.ks_test->statistic) << " | " << fmt4(p.ks_test->p_value) << " |\n";
    } else {
      md << "- | - | - | - |\n";
    }
  }
}

}  // namespace

std::string render_markdown(const Report& report) {
  std::ostringstream md;
  md << "# Summary evaluation report\n\n";
  md << "## Scores\n\n";
  md << "Mean (standard deviation) per prompt. The best mean per metric is in bold; "
        "ties go to the lower standard deviation.\n\n";
  md << "| prompt |";
  for (auto m : kMetricNames) md << ' ' << m << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < std::size(kMetricNames); ++i) md << "---|";
  md << '\n';
  std::map<std::pair<std::string, std::string>, const AggregateRow*> cells;
  for (const auto& a : report.aggregates) cells[{a.prompt_key, a.metric_name}] = &a;
  for (const auto& key : prompt_keys_in_order(report)) {
    md << "| " << key << " |";
    for (auto m : kMetricNames) {
      auto it = cells.find({key, std::string(m)});
      if (it == cells.end()) {
        md << " - |";
        continue;
      }
      const auto cell = format_mean_std(it->second->mean, it->second->std);
      md << ' ' << (it->second->best ? "**" + cell + "**" : cell) << " |";
    }
    md << '\n';
  }

  if (!report.comparisons.empty()) {
    md << "\n## Pairwise tests\n\n";
    md << "One-sided Welch t-test and KS test; the alternative is that the candidate scores higher.\n\n";
    tests_table(md, report.comparisons, "candidate", "baseline");
  }

  if (!report.winners.empty()) {
    std::set<std::string> keys;
    for (const auto& w : report.winners) {
      for (const auto& [k, c] : w.counts) keys.insert(k);
    }
    md << "\n## Best prompt per method\n\n";
    md << "| metric |";
    for (const auto& k : keys) md << ' ' << k << " |";
    md << " ties | methods |\n|---|";
    for (std::size_t i = 0; i < keys.size(); ++i) md << "---|";
    md << "---|---|\n";
    for (const auto& w : report.winners) {
      md << "| " << w.metric_name << " |";
      for (const auto& k : keys) {
        auto it = w.counts.find(k);
        md << ' ' << (it == w.counts.end() ? 0 : it->second) << " |";
      }
      md << ' ' << w.ties << " | " << w.methods << " |\n";
    }
  }

  if (!report.masking.empty()) {
    md << "\n## Masking effect\n\n";
    md << "Alternative: unmasked scores are higher than masked scores.\n\n";
    tests_table(md, report.masking, "unmasked", "masked");
  }

  if (!report.warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) md << "- " << w << '\n';
  }
  return md.str();
}

std::string render_csv(const Report& report) {
  std::ostringstream csv;
  csv << "section,prompt_key,baseline_key,metric,n,mean,std,median,best,cell,test,statistic,p_value,count\n";
  for (const auto& a : report.aggregates) {
    csv << "aggregate," << a.prompt_key << ",," << a.metric_name << ',' << a.n << ','
        << fmt_g(a.mean) << ',' << fmt_g(a.std) << ',' << fmt_g(a.median) << ','
        << (a.best ? "true" : "false") << ',' << format_mean_std(a.mean, a.std) << ",,,,\n";
  }
  auto tests = [&](const char* section, const std::vector<PairwiseTest>& list) {
    for (const auto& p : list) {
      for (const auto* t : {&p.t_test, &p.ks_test}) {
        if (!*t) continue;
        csv << section << ',' << p.candidate_key << ',' << p.baseline_key << ',' << p.metric_name << ','
            << (*t)->n_a << ",,,,,,"
            << ((*t)->kind == TestKind::TOneSided ? "t_one_sided" : "ks_one_sided") << ','
            << fmt_g((*t)->statistic) << ',' << fmt_g((*t)->p_value) << ",\n";
      }
    }
  };
  tests("comparison", report.comparisons);
  for (const auto& w : report.winners) {
    for (const auto& [k, c] : w.counts) {
      csv << "winner," << k << ",," << w.metric_name << ",,,,,,,,,," << c << '\n';
    }
    csv << "winner,ties,," << w.metric_name << ",,,,,,,,,," << w.ties << '\n';
  }
  tests("masking", report.masking);
  return csv.str();
}

}  // namespace jdbench
