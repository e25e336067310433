#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "jdbench/gateway.hpp"
#include "jdbench/metrics.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace jdbench;

namespace {

std::vector<std::pair<std::string, std::string>> metric_pairs() {
  auto j = nlohmann::json::parse(read_file(helpers::fixtures_dir() + "/metric_pairs.json"));
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : j.at("pairs")) out.emplace_back(p.at("candidate"), p.at("reference"));
  return out;
}

class ScriptedScorer : public HttpTransport {
 public:
  explicit ScriptedScorer(HttpResponse r) : r_(std::move(r)) {}
  HttpResponse post_json(const std::string&, const std::string& body, const HttpHeaders&, double) override {
    last_body = body;
    return r_;
  }
  std::string last_body;

 private:
  HttpResponse r_;
};

}  // namespace

TEST(Tokenize, MatchesOracle) {
  for (const auto& [c, r] : metric_pairs()) {
    EXPECT_EQ(tokenize_summary(c).tokens, oracle::tokenize(c)) << c;
    EXPECT_EQ(tokenize_summary(r).tokens, oracle::tokenize(r)) << r;
  }
  EXPECT_EQ(tokenize_summary("Returns x.y, Z!").tokens,
            (std::vector<std::string>{"returns", "x", ".", "y", ",", "z", "!"}));
}

TEST(Metrics, OracleSuite) {
  const auto pairs = metric_pairs();
  ASSERT_GE(pairs.size(), 30u);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [c, r] : pairs) {
    const auto ct = tokenize_summary(c), rt = tokenize_summary(r);
    const auto oc = oracle::tokenize(c), orr = oracle::tokenize(r);
    EXPECT_NEAR(bleu_cn(ct, rt), oracle::bleu_cn(oc, orr), 1e-9) << c << " | " << r;
    EXPECT_NEAR(bleu_dc(ct, rt), oracle::bleu_dc(oc, orr), 1e-9) << c << " | " << r;
    EXPECT_NEAR(meteor(ct, rt), oracle::meteor(oc, orr), 1e-9) << c << " | " << r;
    const auto rouge = rouge_l(ct, rt);
    const double l = static_cast<double>(oracle::lcs(oc, orr));
    EXPECT_NEAR(rouge.precision, oc.empty() ? 0.0 : l / static_cast<double>(oc.size()), 1e-9);
    EXPECT_NEAR(rouge.recall, l / static_cast<double>(orr.size()), 1e-9);
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(elapsed, 1.0);
}

TEST(Metrics, IdentityPairsAreExact) {
  for (const auto& [c, r] : metric_pairs()) {
    const auto t = tokenize_summary(r);
    EXPECT_EQ(bleu_cn(t, t), 1.0) << r;
    EXPECT_EQ(bleu_dc(t, t), 1.0) << r;
    const auto rouge = rouge_l(t, t);
    EXPECT_EQ(rouge.precision, 1.0);
    EXPECT_EQ(rouge.recall, 1.0);
  }
}

TEST(Metrics, HandComputedValues) {
  // 3 candidate tokens, 4 reference tokens, all n-grams match: BP = exp(1 - 4/3).
  EXPECT_NEAR(bleu_cn(tokenize_summary("the cat sat"), tokenize_summary("the cat sat down")),
              std::exp(-1.0 / 3.0), 1e-12);
  // No unigram matches: CN is 0, DC gives orders 1 and 2 precisions 1/(2*2), 1/(4*1).
  EXPECT_EQ(bleu_cn(tokenize_summary("a b"), tokenize_summary("c d e")), 0.0);
  EXPECT_NEAR(bleu_dc(tokenize_summary("a b"), tokenize_summary("c d e")),
              std::exp(1.0 - 1.5) * std::pow(0.25 * 0.25, 0.25), 1e-12);
  auto rouge = rouge_l(tokenize_summary("a b c d"), tokenize_summary("a c d e"));
  EXPECT_DOUBLE_EQ(rouge.precision, 0.75);
  EXPECT_DOUBLE_EQ(rouge.recall, 0.75);
  // Reversed five words: one match per chunk is the best alignment with 5 matches.
  auto m = meteor_align(oracle::Tokens{"a", "b", "c", "d", "e"}, oracle::Tokens{"e", "d", "c", "b", "a"});
  EXPECT_EQ(m.matches, 5u);
  EXPECT_EQ(m.chunks, 5u);
  // Exact match: 1 chunk, penalty 0.5 / n^3.
  EXPECT_NEAR(meteor(tokenize_summary("a b c d"), tokenize_summary("a b c d")), 1.0 - 0.5 / 64.0, 1e-12);
}

TEST(Metrics, LcsMatchesOracleOnRandomSequences) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(0, 12), sym(0, 3);
  for (int i = 0; i < 200; ++i) {
    oracle::Tokens a, b;
    for (int k = len(rng); k > 0; --k) a.push_back(std::string(1, static_cast<char>('a' + sym(rng))));
    for (int k = len(rng); k > 0; --k) b.push_back(std::string(1, static_cast<char>('a' + sym(rng))));
    EXPECT_EQ(lcs_length(a, b), oracle::lcs(a, b));
    if (a.size() <= 8 && b.size() <= 8) {
      auto mine = meteor_align(a, b);
      auto ref = oracle::meteor_alignment(a, b);
      EXPECT_EQ(mine.matches, ref.first);
      EXPECT_EQ(mine.chunks, ref.second);
    }
  }
}

TEST(Metrics, EdgeCases) {
  const auto empty = tokenize_summary("");
  const auto ref = tokenize_summary("some words");
  EXPECT_EQ(bleu_cn(empty, ref), 0.0);
  EXPECT_EQ(bleu_dc(empty, ref), 0.0);
  EXPECT_THROW(bleu_cn(ref, empty), DataError);
  ScoreWarnings w;
  EXPECT_EQ(meteor(empty, ref, &w), 0.0);
  auto r = rouge_l(empty, ref, &w);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_GE(w.empty_inputs.load(), 1u);
}

TEST(Metrics, BoundsOnFixture) {
  for (const auto& [c, r] : metric_pairs()) {
    auto v = score_pair(c, r, {});
    for (auto name : {"bleu", "bleu_dc", "meteor", "rouge_prec", "rouge_rec"}) {
      auto x = metric_value(v, name);
      ASSERT_TRUE(x.has_value());
      EXPECT_GE(*x, 0.0);
      EXPECT_LE(*x, 1.0);
    }
    EXPECT_FALSE(v.bert_score || v.bleu_rt || v.sent_sim);
  }
}

TEST(Embedding, HashingEmbedderAndCosine) {
  HashingEmbedder e;
  auto a = *e.embed("Returns the sum of two numbers.");
  EXPECT_EQ(a.size(), 256u);
  EXPECT_EQ(a, *e.embed("Returns the sum of two numbers."));
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  EXPECT_EQ(cosine(a, std::vector<double>(256, 0.0)), 0.0);
  EXPECT_THROW(cosine(a, {1.0}), std::invalid_argument);
  auto sim = sentence_similarity("Returns the sum.", "Returns the total sum.", e);
  ASSERT_TRUE(sim);
  EXPECT_GT(*sim, 0.5);
  EXPECT_LE(*sim, 1.0);
}

TEST(ExternalScorer, ValidatesResponses) {
  ScoreWarnings w;
  auto s = parse_external_scores(R"({"bert_score": 0.8, "bleu_rt": 1.7})", &w);
  EXPECT_EQ(s.bert_score, 0.8);
  EXPECT_EQ(s.bleu_rt, 1.0);
  EXPECT_EQ(w.clamped_values.load(), 1u);
  s = parse_external_scores(R"({"bert_score": "x"})", &w);
  EXPECT_FALSE(s.bert_score);
  EXPECT_FALSE(s.bleu_rt);
  EXPECT_EQ(w.scorer_failures.load(), 2u);
  s = parse_external_scores("not json", &w);
  EXPECT_EQ(w.scorer_failures.load(), 3u);

  auto transport = std::make_shared<ScriptedScorer>(HttpResponse{200, R"({"bert_score": 0.5, "bleu_rt": 0.25})", ""});
  HttpExternalScorer scorer({"http://localhost:1/score"}, transport);
  ScoringProviders providers{nullptr, &scorer, &w};
  auto v = score_pair("a b", "a b c", providers);
  EXPECT_EQ(v.bert_score, 0.5);
  EXPECT_EQ(v.bleu_rt, 0.25);
  EXPECT_EQ(nlohmann::json::parse(transport->last_body)["reference"], "a b c");

  auto down = std::make_shared<ScriptedScorer>(HttpResponse{0, "", "refused"});
  HttpExternalScorer dead({"http://localhost:1/score"}, down);
  ScoringProviders p2{nullptr, &dead, &w};
  auto v2 = score_pair("a b", "a b c", p2);
  EXPECT_FALSE(v2.bert_score);
  EXPECT_EQ(w.scorer_failures.load(), 4u);
}

TEST(MetricVectorJson, RoundTripKeepsAbsentFields) {
  MetricVector v;
  v.bleu = 0.25;
  v.sent_sim = 0.5;
  auto j = to_json(v);
  EXPECT_TRUE(j["bert_score"].is_null());
  auto back = metric_vector_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"bert_score", "bleu_dc", "bleu", "bleu_rt", "meteor", "rouge_prec",
                                            "rouge_rec", "sent_sim"}));
}

TEST(ScoreRecord, RejectsFailedGeneration) {
  GenerationRecord g;
  g.status = GenerationStatus::Failed;
  EXPECT_THROW(score_record(g, "x", {}), DataError);
  g.status = GenerationStatus::Ok;
  g.candidate_summary = "x";
  EXPECT_EQ(score_record(g, "x", {}).bleu, 1.0);
}
