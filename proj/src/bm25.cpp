#include "jdbench/bm25.hpp"

#include <algorithm>
#include <cmath>

#include "jdbench/common.hpp"

namespace jdbench {

Bm25Index::Bm25Index(std::vector<std::pair<std::string, TokenStream>> docs, double k1, double b)
    : k1_(k1), b_(b) {
  if (docs.empty()) throw ConfigError("cannot build a retrieval index over an empty training set");
  for (auto& [id, stream] : docs) {
    if (doc_index_.count(id)) throw ConfigError("duplicate document id in index: " + id);
    doc_index_.emplace(id, doc_ids_.size());
    doc_ids_.push_back(id);
    doc_lengths_.push_back(stream.tokens.size());
    auto& tf = term_frequency_.emplace_back();
    for (const auto& tok : stream.tokens) ++tf[tok];
    for (const auto& [term, count] : tf) ++doc_frequency_[term];
  }
  finalize();
}

void Bm25Index::finalize() {
  std::size_t total = 0;
  for (auto len : doc_lengths_) total += len;
  avg_doc_length_ = static_cast<double>(total) / static_cast<double>(doc_lengths_.size());
}

Bm25Index Bm25Index::build(const std::vector<MethodRecord>& train, double k1, double b) {
  std::vector<std::pair<std::string, TokenStream>> docs;
  docs.reserve(train.size());
  for (const auto& r : train) docs.emplace_back(r.id, tokenize_code(r.body_text));
  return Bm25Index(std::move(docs), k1, b);
}

double Bm25Index::idf(const std::string& term) const {
  const double n = static_cast<double>(doc_ids_.size());
  const double df = static_cast<double>(doc_frequency(term));
  return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

std::size_t Bm25Index::doc_frequency(const std::string& term) const {
  auto it = doc_frequency_.find(term);
  return it == doc_frequency_.end() ? 0 : it->second;
}

std::size_t Bm25Index::term_frequency(const std::string& doc_id, const std::string& term) const {
  const auto& tf = term_frequency_.at(doc_index_.at(doc_id));
  auto it = tf.find(term);
  return it == tf.end() ? 0 : it->second;
}

double Bm25Index::score_doc(const std::vector<std::string>& unique_query, std::size_t doc) const {
  const auto& tf_map = term_frequency_[doc];
  const double len = static_cast<double>(doc_lengths_[doc]);
  double total = 0.0;
  for (const auto& term : unique_query) {
    auto it = tf_map.find(term);
    if (it == tf_map.end()) continue;
    const double tf = static_cast<double>(it->second);
    const double norm = k1_ * (1.0 - b_ + b_ * len / avg_doc_length_);
    total += idf(term) * tf * (k1_ + 1.0) / (tf + norm);
  }
  return total;
}

namespace {

std::vector<std::string> unique_sorted(const TokenStream& query) {
  std::vector<std::string> terms = query.tokens;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

}  // namespace

double Bm25Index::score(const TokenStream& query, const std::string& doc_id) const {
  auto it = doc_index_.find(doc_id);
  if (it == doc_index_.end()) throw std::out_of_range("unknown document id: " + doc_id);
  return score_doc(unique_sorted(query), it->second);
}

std::vector<ScoredExemplar> Bm25Index::top_k(const TokenStream& query, std::size_t k,
                                             const std::set<std::string>& exclude) const {
  const auto terms = unique_sorted(query);
  std::vector<ScoredExemplar> scored;
  scored.reserve(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    if (exclude.count(doc_ids_[d])) continue;
    scored.push_back(ScoredExemplar{doc_ids_[d], score_doc(terms, d), 0});
  }
  auto better = [](const ScoredExemplar& a, const ScoredExemplar& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.method_id < b.method_id;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    better);
  scored.resize(n);
  for (std::size_t r = 0; r < n; ++r) scored[r].rank = static_cast<int>(r + 1);
  return scored;
}

nlohmann::json Bm25Index::to_json(const std::string& corpus_hash) const {
  nlohmann::json docs = nlohmann::json::array();
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    std::map<std::string, std::size_t> tf(term_frequency_[d].begin(), term_frequency_[d].end());
    docs.push_back({{"id", doc_ids_[d]}, {"length", doc_lengths_[d]}, {"tf", tf}});
  }
  return {{"corpus_hash", corpus_hash}, {"k1", k1_}, {"b", b_}, {"docs", docs}};
}

Bm25Index Bm25Index::from_json(const nlohmann::json& j, const std::string& expected_corpus_hash) {
  if (j.at("corpus_hash").get<std::string>() != expected_corpus_hash) {
    throw ConfigError("index sidecar was built from a different corpus");
  }
  Bm25Index index;
  index.k1_ = j.at("k1").get<double>();
  index.b_ = j.at("b").get<double>();
  for (const auto& doc : j.at("docs")) {
    const auto id = doc.at("id").get<std::string>();
    index.doc_index_.emplace(id, index.doc_ids_.size());
    index.doc_ids_.push_back(id);
    index.doc_lengths_.push_back(doc.at("length").get<std::size_t>());
    auto& tf = index.term_frequency_.emplace_back();
    for (const auto& [term, count] : doc.at("tf").items()) {
      tf[term] = count.get<std::size_t>();
      ++index.doc_frequency_[term];
    }
  }
  if (index.doc_ids_.empty()) throw ConfigError("index sidecar holds no documents");
  index.finalize();
  return index;
}

std::string corpus_content_hash(const std::vector<MethodRecord>& records) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& r : records) {
    h = fnv1a64(r.id, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(r.body_text, h);
  }
  return to_hex(h);
}

}  // namespace jdbench
