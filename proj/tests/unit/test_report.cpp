#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "jdbench/report.hpp"
#include "test_helpers.hpp"

using namespace jdbench;

namespace {

std::vector<ScoreRow> fixed_scores() {
  std::vector<ScoreRow> out;
  const Strategy strategies[] = {Strategy::Simple, Strategy::Asap};
  for (int m = 0; m < 5; ++m) {
    for (auto s : strategies) {
      for (bool masked : {false, true}) {
        ScoreRow r;
        r.method_id = "m" + std::to_string(m);
        r.strategy = s;
        r.masked = masked;
        const double base = (s == Strategy::Asap ? 0.6 : 0.4) - (masked ? 0.15 : 0.0);
        r.metrics.bleu = base + 0.01 * m;
        r.metrics.bleu_dc = base + 0.02 * ((m * 7) % 5);
        r.metrics.meteor = base / 2 + 0.03 * m;
        r.metrics.rouge_prec = 0.5;
        r.metrics.rouge_rec = base + 0.005 * m * m;
        r.metrics.sent_sim = 0.1 * m + (masked ? 0.0 : 0.05);
        out.push_back(r);
      }
    }
  }
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Format, TableCellStyle) {
  EXPECT_EQ(format_mean_std(0.611, 0.084), "0.61(0.08)");
  EXPECT_EQ(format_fixed2(0.005), "0.01");
  EXPECT_EQ(format_fixed2(0.125), "0.13");
  EXPECT_EQ(format_fixed2(0.0049), "0.00");
  EXPECT_EQ(format_fixed2(1.0), "1.00");
  EXPECT_EQ(format_fixed2(0.999), "1.00");
  EXPECT_EQ(format_fixed2(-0.256), "-0.26");
  EXPECT_EQ(format_fixed2(-0.001), "0.00");
  EXPECT_EQ(format_mean_std(0.3, 0.0), "0.30(0.00)");
}

TEST(Report, JsonRoundTripIsBitExact) {
  auto scores = fixed_scores();
  auto report = build_report(scores, {{{"simple", "asap"}}, {Strategy::Simple, Strategy::Asap}, {"simple", "asap"}});
  TestResult degenerate{TestKind::TOneSided, std::numeric_limits<double>::infinity(), 0.0, 2, 2, 0.0};
  report.comparisons.push_back({"x", "y", "bleu", degenerate, std::nullopt});

  const auto text = render_json(report);
  auto back = report_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(render_json(back), text);
  ASSERT_EQ(back.aggregates.size(), report.aggregates.size());
  for (std::size_t i = 0; i < back.aggregates.size(); ++i) {
    EXPECT_TRUE(same_bits(back.aggregates[i].mean, report.aggregates[i].mean));
    EXPECT_TRUE(same_bits(back.aggregates[i].std, report.aggregates[i].std));
    EXPECT_TRUE(same_bits(back.aggregates[i].median, report.aggregates[i].median));
    EXPECT_EQ(back.aggregates[i].best, report.aggregates[i].best);
  }
  for (std::size_t i = 0; i < back.comparisons.size(); ++i) {
    const auto& a = back.comparisons[i];
    const auto& b = report.comparisons[i];
    ASSERT_EQ(a.t_test.has_value(), b.t_test.has_value());
    if (a.t_test) {
      EXPECT_TRUE(same_bits(a.t_test->statistic, b.t_test->statistic));
      EXPECT_TRUE(same_bits(a.t_test->p_value, b.t_test->p_value));
      EXPECT_TRUE(same_bits(a.t_test->df, b.t_test->df));
    }
    if (a.ks_test) EXPECT_TRUE(same_bits(a.ks_test->p_value, b.ks_test->p_value));
  }
  EXPECT_TRUE(std::isinf(back.comparisons.back().t_test->statistic));
}

TEST(Report, GoldenMarkdownAndCsv) {
  auto scores = fixed_scores();
  auto report = build_report(scores, {{{"simple", "asap"}}, {Strategy::Simple, Strategy::Asap}, {"simple", "asap"}});
  EXPECT_TRUE(helpers::matches_golden("report/report.md", render_markdown(report)));
  EXPECT_TRUE(helpers::matches_golden("report/report.csv", render_csv(report)));
}

TEST(Report, StructureOnFixedScores) {
  auto report = build_report(fixed_scores(),
                             {{{"simple", "asap"}}, {Strategy::Simple, Strategy::Asap}, {"simple", "asap"}});
  // 4 prompt keys x 6 present metrics.
  EXPECT_EQ(report.aggregates.size(), 24u);
  EXPECT_EQ(report.comparisons.size(), std::size(kMetricNames));
  EXPECT_EQ(report.masking.size(), 2 * std::size(kMetricNames));
  for (const auto& w : report.winners) {
    std::size_t total = w.ties;
    for (const auto& [k, c] : w.counts) total += c;
    EXPECT_EQ(total, w.methods);
  }
  auto md = render_markdown(report);
  EXPECT_NE(md.find("## Masking effect"), std::string::npos);
  EXPECT_NE(md.find("| asap |"), std::string::npos);
}
