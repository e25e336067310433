#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "jdbench/bm25.hpp"
#include "jdbench/common.hpp"
#include "jdbench/corpus.hpp"
#include "jdbench/http.hpp"
#include "jdbench/prompts.hpp"

namespace jdbench {

struct GenerationRequest {
  std::string prompt_text;
  std::string model_name = "mock";
  double temperature = 0.0;
  int max_tokens = 256;
  std::vector<std::string> stop_sequences;
  double timeout_seconds = 120.0;
  int retries = 2;
};

enum class GenerationStatus { Ok, Failed };

struct GenerationRecord {
  std::string method_id;
  Strategy strategy = Strategy::Simple;
  bool masked = false;
  std::string model_name;
  std::string raw_output;
  std::string candidate_summary;
  std::string stage1_output;  // SummarizeExplanation only
  double latency_ms = 0.0;
  int attempt_count = 0;
  GenerationStatus status = GenerationStatus::Failed;
  std::string error;
};

nlohmann::ordered_json to_json(const GenerationRecord& r);
GenerationRecord generation_from_json(const nlohmann::json& j);

struct CompletionResult {
  bool ok = false;
  std::string text;
  int attempts = 0;
  double latency_ms = 0.0;
  std::string error;
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  // Returns a failed result for exhausted retries. Throws ConfigError for
  // authentication failures, which no retry can fix.
  virtual CompletionResult complete(const GenerationRequest& request) = 0;
};

// Output is a pure function of a stable hash of the prompt text. Latency is
// reported as zero so run files stay byte-identical.
class MockProvider : public CompletionProvider {
 public:
  CompletionResult complete(const GenerationRequest& request) override;
};

// Backoff between attempts; the number of retries comes from the request.
struct RetryPolicy {
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};

  std::chrono::milliseconds delay_for(int retry_index) const;  // 0-based
};

struct LlmEndpoint {
  std::string url;
  std::string model = "codellama";
  std::string auth_env;
  // Request body template. String values "{{prompt}}", "{{model}}",
  // "{{temperature}}", "{{max_tokens}}" and "{{stop}}" are substituted.
  nlohmann::json request_template;
  std::string response_pointer = "/choices/0/message/content";

  static nlohmann::json chat_template();
};

// Chat/completion web endpoint. Transport errors, 429 and 5xx are retried with
// exponential backoff; 401/403 raise ConfigError; other statuses fail at once.
class HttpProvider : public CompletionProvider {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  HttpProvider(LlmEndpoint endpoint, RetryPolicy policy,
               std::shared_ptr<HttpTransport> transport = nullptr, Sleeper sleeper = nullptr);
  CompletionResult complete(const GenerationRequest& request) override;

  std::string build_body(const GenerationRequest& request) const;

 private:
  LlmEndpoint endpoint_;
  RetryPolicy policy_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

// Wraps a provider and appends {"prompt_hash", "prompt", "output"} lines for
// every successful call. Thread-safe.
class RecordingProvider : public CompletionProvider {
 public:
  explicit RecordingProvider(std::shared_ptr<CompletionProvider> inner) : inner_(std::move(inner)) {}
  CompletionResult complete(const GenerationRequest& request) override;
  std::string recording() const;

 private:
  std::shared_ptr<CompletionProvider> inner_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::ordered_json> entries_;  // keyed by prompt hash
};

// Serves outputs from a recording; unknown prompts fail.
class ReplayProvider : public CompletionProvider {
 public:
  explicit ReplayProvider(std::string_view recording_jsonl);
  CompletionResult complete(const GenerationRequest& request) override;

 private:
  std::map<std::string, std::string> outputs_;
};

std::string prompt_hash(std::string_view prompt_text);

// Strips code fences, comment delimiters and gutters, leading labels such as
// "Summary:", and @-tag lines; collapses whitespace. Idempotent.
std::string postprocess_summary(std::string_view raw);

struct RetrievalContext {
  const Bm25Index* index = nullptr;
  std::map<std::string, const MethodRecord*> train_by_id;
  std::size_t exemplar_count = 3;
};

struct GatewayDeps {
  CompletionProvider* provider = nullptr;
  GenerationRequest request_defaults;  // prompt_text is ignored
  const RetrievalContext* retrieval = nullptr;  // required for Asap
};

struct RunOutcome {
  GenerationRecord record;
  RenderedPrompt final_prompt;
  std::vector<std::string> notes;  // run-log lines for this record
};

RunOutcome run_strategy(const MethodRecord& method, Strategy strategy, bool masked,
                        const GatewayDeps& deps);

// Renders the Asap prompt, retrieving exemplars from the training partition.
RenderedPrompt build_asap_prompt(const MethodRecord& method, bool masked,
                                 const RetrievalContext& retrieval,
                                 std::vector<std::string>* notes = nullptr);

struct SweepTask {
  const MethodRecord* method;
  Strategy strategy;
  bool masked;
};

// Runs tasks with at most max_in_flight concurrent provider calls. Results are
// returned in task order regardless of completion order. Throws ConfigError
// when a (method, strategy, masked) triple repeats.
std::vector<RunOutcome> run_sweep(const std::vector<SweepTask>& tasks, const GatewayDeps& deps,
                                  std::size_t max_in_flight);

}  // namespace jdbench
