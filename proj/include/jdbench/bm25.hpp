#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "jdbench/code_facts.hpp"
#include "jdbench/corpus.hpp"

namespace jdbench {

struct ScoredExemplar {
  std::string method_id;
  double score = 0.0;
  int rank = 0;  // 1-based
};

// Okapi BM25 with the non-negative idf  ln((N - df + 0.5) / (df + 0.5) + 1).
// Immutable after construction; concurrent reads are safe.
class Bm25Index {
 public:
  static constexpr double kDefaultK1 = 1.2;
  static constexpr double kDefaultB = 0.75;

  // One document per (id, tokens). Throws ConfigError when docs is empty.
  Bm25Index(std::vector<std::pair<std::string, TokenStream>> docs, double k1 = kDefaultK1,
            double b = kDefaultB);

  // Documents are tokenize_code(body_text) of each training method.
  static Bm25Index build(const std::vector<MethodRecord>& train, double k1 = kDefaultK1,
                         double b = kDefaultB);

  // Throws std::out_of_range for an unknown id.
  double score(const TokenStream& query, const std::string& doc_id) const;

  // Highest-scoring k documents not in `exclude`; ties go to the smaller id.
  std::vector<ScoredExemplar> top_k(const TokenStream& query, std::size_t k,
                                    const std::set<std::string>& exclude = {}) const;

  double idf(const std::string& term) const;

  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<std::size_t>& doc_lengths() const { return doc_lengths_; }
  double avg_doc_length() const { return avg_doc_length_; }
  std::size_t doc_frequency(const std::string& term) const;
  std::size_t term_frequency(const std::string& doc_id, const std::string& term) const;
  double k1() const { return k1_; }
  double b() const { return b_; }

  // Sidecar persistence keyed by a content hash of the indexed corpus.
  nlohmann::json to_json(const std::string& corpus_hash) const;
  static Bm25Index from_json(const nlohmann::json& j, const std::string& expected_corpus_hash);

 private:
  Bm25Index() = default;
  void finalize();
  double score_doc(const std::vector<std::string>& unique_query, std::size_t doc) const;

  std::vector<std::string> doc_ids_;
  std::vector<std::size_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  std::map<std::string, std::size_t> doc_frequency_;
  std::vector<std::unordered_map<std::string, std::size_t>> term_frequency_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  double k1_ = kDefaultK1;
  double b_ = kDefaultB;
};

// Hash over the ids and bodies of the training records.
std::string corpus_content_hash(const std::vector<MethodRecord>& records);

}  // namespace jdbench
