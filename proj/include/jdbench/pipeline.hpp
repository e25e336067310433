#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "jdbench/bm25.hpp"
#include "jdbench/config.hpp"
#include "jdbench/corpus.hpp"
#include "jdbench/gateway.hpp"
#include "jdbench/metrics.hpp"
#include "jdbench/report.hpp"
#include "jdbench/stats.hpp"

namespace jdbench {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct ExtractResult {
  std::vector<MethodRecord> records;
  ExtractStats stats;
  std::size_t files_scanned = 0;
};

ExtractResult extract_corpus(const std::vector<std::string>& roots, const ScanOptions& options,
                             bool require_javadoc);

// Records that carry a usable ground-truth summary.
std::vector<MethodRecord> documented(const std::vector<MethodRecord>& records);

// Loads the index sidecar when its corpus hash matches `train`, otherwise
// builds the index and rewrites the sidecar. Empty path: build only.
Bm25Index load_or_build_index(const std::vector<MethodRecord>& train, const std::string& sidecar_path);

RetrievalContext make_retrieval(const Bm25Index& index, const std::vector<MethodRecord>& train);

// Task order: methods in input order, then strategies, then unmasked before masked.
std::vector<SweepTask> make_tasks(const std::vector<MethodRecord>& eval,
                                  const std::vector<Strategy>& strategies, MaskedMode masked);

// First-stage prompts for every task (SummarizeExplanation's second stage
// depends on model output and is not included).
std::vector<RenderedPrompt> render_prompts(const std::vector<SweepTask>& tasks,
                                           const RetrievalContext& retrieval);

std::unique_ptr<CompletionProvider> make_provider(const LlmSettings& settings);
GenerationRequest make_request_defaults(const LlmSettings& settings);

struct ScoreResult {
  std::vector<ScoreRow> rows;
  std::size_t skipped_failed = 0;
  std::size_t skipped_unknown = 0;  // method id missing from the corpus
};

ScoreResult score_generations(const std::vector<GenerationRecord>& generations,
                              const std::vector<MethodRecord>& corpus, const ScoringProviders& providers);

struct ScoringSetup {
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<ExternalScorer> scorer;
};

ScoringSetup make_scoring(const EmbedderSettings& embedder, const ScorerSettings& scorer);

ReportOptions make_report_options(const std::vector<ScoreRow>& scores, const std::string& baseline,
                                  const std::vector<std::string>& candidates);

// Adds or replaces the entry for `command` in <dir>/manifest.json.
void write_manifest(const std::string& dir, const std::string& command, nlohmann::ordered_json entry);

std::string generations_jsonl(const std::vector<GenerationRecord>& records);
std::vector<GenerationRecord> read_generations_jsonl(const std::string& path);
std::string prompts_jsonl(const std::vector<RenderedPrompt>& prompts);

struct PipelineSummary {
  std::size_t methods_extracted = 0;
  std::size_t train_size = 0;
  std::size_t eval_size = 0;
  std::size_t selected = 0;
  std::size_t generations_ok = 0;
  std::size_t generations_failed = 0;
  std::size_t scored = 0;
};

// extract -> split -> select -> prompts -> run -> score -> report, writing
// every intermediate file and a manifest into config.output_dir.
PipelineSummary run_pipeline(const RunConfig& config);

}  // namespace jdbench
