#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jdbench/bm25.hpp"
#include "jdbench/common.hpp"
#include "jdbench/corpus.hpp"
#include "oracles.hpp"

using namespace jdbench;

namespace {

struct Fixture {
  std::vector<std::pair<std::string, TokenStream>> docs;
  std::vector<TokenStream> queries;
};

// Zipf-ish vocabulary so that some terms are common and most are rare.
Fixture synthetic_corpus(std::uint32_t seed, std::size_t n_docs) {
  std::mt19937 rng(seed);
  std::vector<std::string> vocab;
  for (int i = 0; i < 60; ++i) vocab.push_back("t" + std::to_string(i));
  std::vector<double> weights;
  for (std::size_t i = 0; i < vocab.size(); ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_int_distribution<int> len(1, 40);
  Fixture f;
  for (std::size_t d = 0; d < n_docs; ++d) {
    TokenStream t;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) t.tokens.push_back(vocab[pick(rng)]);
    char id[16];
    std::snprintf(id, sizeof id, "d%04zu", (d * 7919) % n_docs);  // ids not in insertion order
    f.docs.emplace_back(id, t);
  }
  std::uniform_int_distribution<int> qlen(1, 6);
  for (int q = 0; q < 20; ++q) {
    TokenStream t;
    const int n = qlen(rng);
    for (int i = 0; i < n; ++i) t.tokens.push_back(vocab[pick(rng)]);
    if (q == 0) t.tokens = {"unseen"};
    f.queries.push_back(t);
  }
  return f;
}

oracle::Bm25 as_oracle(const Fixture& f) {
  oracle::Bm25 o;
  for (const auto& [id, t] : f.docs) o.docs.emplace_back(id, t.tokens);
  return o;
}

}  // namespace

TEST(Bm25, MatchesOracleOnSyntheticCorpora) {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    for (std::size_t n : {1u, 7u, 50u, 200u}) {
      auto f = synthetic_corpus(seed, n);
      Bm25Index index(f.docs);
      auto o = as_oracle(f);
      for (const auto& q : f.queries) {
        for (std::size_t d = 0; d < f.docs.size(); ++d) {
          EXPECT_NEAR(index.score(q, f.docs[d].first), o.score(q.tokens, d), 1e-9);
        }
        auto got = index.top_k(q, 3);
        std::vector<std::string> ids;
        for (const auto& e : got) ids.push_back(e.method_id);
        EXPECT_EQ(ids, o.top_k(q.tokens, 3)) << "seed " << seed << " n " << n;
        for (std::size_t r = 0; r < got.size(); ++r) EXPECT_EQ(got[r].rank, static_cast<int>(r + 1));
      }
    }
  }
}

TEST(Bm25, ExcludeSetAndTies) {
  std::vector<std::pair<std::string, TokenStream>> docs = {
      {"b", {{"x", "y"}}}, {"a", {{"x", "y"}}}, {"c", {{"x", "y"}}}, {"d", {{"z"}}}};
  Bm25Index index(docs);
  auto top = index.top_k({{"x"}}, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].method_id, "a");
  EXPECT_EQ(top[1].method_id, "b");
  top = index.top_k({{"x"}}, 3, {"a"});
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].method_id, "b");
  EXPECT_EQ(top[1].method_id, "c");
  EXPECT_EQ(top[2].method_id, "d");
  EXPECT_EQ(index.top_k({{"x"}}, 10).size(), 4u);
}

TEST(Bm25, DuplicateQueryTermsCountOnce) {
  std::vector<std::pair<std::string, TokenStream>> docs = {{"a", {{"x", "x", "y"}}}, {"b", {{"y"}}}};
  Bm25Index index(docs);
  EXPECT_DOUBLE_EQ(index.score({{"x", "x"}}, "a"), index.score({{"x"}}, "a"));
}

TEST(Bm25, IdfNonNegativeAndStats) {
  auto f = synthetic_corpus(9, 30);
  Bm25Index index(f.docs);
  double total = 0;
  for (auto l : index.doc_lengths()) total += static_cast<double>(l);
  EXPECT_DOUBLE_EQ(index.avg_doc_length(), total / 30.0);
  for (int i = 0; i < 60; ++i) EXPECT_GE(index.idf("t" + std::to_string(i)), 0.0);
  EXPECT_EQ(index.doc_frequency("never"), 0u);
  EXPECT_THROW(index.score({{"t0"}}, "nope"), std::out_of_range);
  EXPECT_THROW(Bm25Index(std::vector<std::pair<std::string, TokenStream>>{}), ConfigError);
}

TEST(Bm25, SidecarRoundTripAndHashCheck) {
  auto f = synthetic_corpus(4, 40);
  Bm25Index index(f.docs);
  auto j = index.to_json("hash-1");
  auto back = Bm25Index::from_json(j, "hash-1");
  for (const auto& q : f.queries) {
    for (const auto& [id, t] : f.docs) EXPECT_DOUBLE_EQ(back.score(q, id), index.score(q, id));
  }
  EXPECT_THROW(Bm25Index::from_json(j, "hash-2"), ConfigError);
}

TEST(Bm25, BuildUsesBodyTokens) {
  MethodRecord a, b;
  a.id = "a";
  a.body_text = "{ return parseInt(value); }";
  b.id = "b";
  b.body_text = "{ list.add(item); }";
  auto index = Bm25Index::build({a, b});
  EXPECT_EQ(index.top_k(tokenize_code("parse value"), 1)[0].method_id, "a");
  EXPECT_NE(corpus_content_hash({a}), corpus_content_hash({a, b}));
}
