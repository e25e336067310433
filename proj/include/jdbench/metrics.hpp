#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "jdbench/http.hpp"

namespace jdbench {

struct GenerationRecord;

// Lowercased words with ASCII punctuation split off as separate tokens.
struct SummaryTokens {
  std::vector<std::string> tokens;
};

SummaryTokens tokenize_summary(std::string_view text);

struct MetricVector {
  std::optional<double> bert_score;
  double bleu_dc = 0.0;
  double bleu = 0.0;
  std::optional<double> bleu_rt;
  double meteor = 0.0;
  double rouge_prec = 0.0;
  double rouge_rec = 0.0;
  std::optional<double> sent_sim;
};

// Metric names in table column order.
inline constexpr std::string_view kMetricNames[] = {"bert_score", "bleu_dc", "bleu",      "bleu_rt",
                                                    "meteor",     "rouge_prec", "rouge_rec", "sent_sim"};

std::optional<double> metric_value(const MetricVector& v, std::string_view name);

nlohmann::ordered_json to_json(const MetricVector& v);
MetricVector metric_vector_from_json(const nlohmann::json& j);

// Counters for conditions that degrade a score without failing the run.
struct ScoreWarnings {
  std::atomic<std::size_t> empty_inputs{0};
  std::atomic<std::size_t> embedder_unavailable{0};
  std::atomic<std::size_t> scorer_failures{0};
  std::atomic<std::size_t> clamped_values{0};
};

// Sentence BLEU with add-one smoothing on orders 2-4 and an unsmoothed unigram
// precision. Throws DataError on an empty reference; an empty candidate scores 0.
double bleu_cn(const SummaryTokens& candidate, const SummaryTokens& reference);

// Sentence BLEU where the z-th zero-match order gets precision 1 / (2^z * total).
double bleu_dc(const SummaryTokens& candidate, const SummaryTokens& reference);

struct RougeL {
  double precision = 0.0;
  double recall = 0.0;
};

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);
RougeL rouge_l(const SummaryTokens& candidate, const SummaryTokens& reference,
               ScoreWarnings* warnings = nullptr);

struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Exact-match alignment with the most matches, and among those the fewest chunks.
MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference);

// alpha = 0.9, beta = 3, gamma = 0.5.
double meteor(const SummaryTokens& candidate, const SummaryTokens& reference,
              ScoreWarnings* warnings = nullptr);

class Embedder {
 public:
  virtual ~Embedder() = default;
  // nullopt when the backing service is unavailable.
  virtual std::optional<std::vector<double>> embed(std::string_view text) = 0;
};

// Deterministic feature-hashing embedder for offline runs and tests.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
  std::optional<std::vector<double>> embed(std::string_view text) override;

 private:
  std::size_t dimension_;
};

struct EmbedderEndpoint {
  std::string url;
  std::string model = "all-MiniLM-L6-v2";
  std::string auth_env;  // name of the environment variable holding a bearer token
  std::string response_pointer = "/data/0/embedding";
  double timeout_seconds = 30.0;
};

// POSTs {"model": ..., "input": text} and reads the vector at response_pointer.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(EmbedderEndpoint endpoint, std::shared_ptr<HttpTransport> transport = nullptr);
  std::optional<std::vector<double>> embed(std::string_view text) override;

 private:
  EmbedderEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
};

// 0 when either vector has zero norm. Throws std::invalid_argument on a dimension mismatch.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

std::optional<double> sentence_similarity(std::string_view candidate, std::string_view reference,
                                          Embedder& embedder, ScoreWarnings* warnings = nullptr);

struct ExternalScores {
  std::optional<double> bert_score;
  std::optional<double> bleu_rt;
};

struct ScorerEndpoint {
  std::string url;
  std::string auth_env;
  double timeout_seconds = 60.0;
};

class ExternalScorer {
 public:
  virtual ~ExternalScorer() = default;
  virtual ExternalScores score(std::string_view candidate, std::string_view reference,
                               ScoreWarnings* warnings) = 0;
};

// POSTs {"candidate": ..., "reference": ...}, expects {"bert_score": x, "bleu_rt": y}.
// Missing or malformed fields come back absent and bump scorer_failures;
// out-of-range values are clamped to [0, 1] and bump clamped_values.
class HttpExternalScorer : public ExternalScorer {
 public:
  explicit HttpExternalScorer(ScorerEndpoint endpoint,
                              std::shared_ptr<HttpTransport> transport = nullptr);
  ExternalScores score(std::string_view candidate, std::string_view reference,
                       ScoreWarnings* warnings) override;

 private:
  ScorerEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
};

// Validates a scorer response body; exposed for testing.
ExternalScores parse_external_scores(std::string_view body, ScoreWarnings* warnings);

// Unconfigured scorer: both fields absent.
ExternalScores external_score(std::string_view candidate, std::string_view reference,
                              ExternalScorer* scorer, ScoreWarnings* warnings = nullptr);

struct ScoringProviders {
  Embedder* embedder = nullptr;      // null leaves sent_sim absent
  ExternalScorer* scorer = nullptr;  // null leaves bert_score and bleu_rt absent
  ScoreWarnings* warnings = nullptr;
};

MetricVector score_pair(std::string_view candidate, std::string_view truth,
                        const ScoringProviders& providers);

// Throws DataError for a failed generation record.
MetricVector score_record(const GenerationRecord& gen, std::string_view truth,
                          const ScoringProviders& providers);

}  // namespace jdbench
