#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "jdbench/code_facts.hpp"
#include "jdbench/common.hpp"
#include "jdbench/corpus.hpp"

namespace jdbench {

inline constexpr std::string_view kMaskToken = "MASKED";

namespace instructions {
inline constexpr std::string_view kGenerate =
    "Please generate a Javadoc summary comment for the Java method below.";
inline constexpr std::string_view kWordLimit = "Please do not use more than 20 words.";
inline constexpr std::string_view kIgnoreHeader = "While generating summary, please ignore:";
inline constexpr std::string_view kIgnoreItems[] = {
    "1. exception handling (e.g. catch block)",
    "2. resource cleanup (e.g. finally block)",
    "3. logging statements (e.g. log)",
};
inline constexpr std::string_view kSummarize =
    "Given the following JAVADOC indicated by JAVADOC: create a shorter summarized version of the "
    "JAVADOC. Keep the summary under 20 words.";
inline constexpr std::string_view kAsap = "Write down the original comment written by the developer.";
inline constexpr std::string_view kCommentLabel = "Comment:";
}  // namespace instructions

struct RenderedPrompt {
  Strategy strategy = Strategy::Simple;
  bool masked = false;
  int stage = 1;
  std::string text;
  std::string method_id;
  std::vector<std::string> exemplar_ids;  // Asap only

  friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

struct AsapExemplar {
  MethodRecord method;
  SemanticFacts facts;
};

// Replaces the method name with MASKED in the name, signature, body and
// parameter list. Whole identifiers only; idempotent.
MethodRecord mask_method(const MethodRecord& method);

RenderedPrompt render_simple(const MethodRecord& method, bool masked);
RenderedPrompt render_word_restrict(const MethodRecord& method, bool masked);
RenderedPrompt render_ignore_exception(const MethodRecord& method, bool masked);

// Stage two of SummarizeExplanation. When masked, the method name is hidden in
// the explanation too. Throws DataError when stage1_output is blank.
RenderedPrompt render_summarize_stage2(const MethodRecord& method, bool masked,
                                       std::string_view stage1_output);

// Exemplars in rank order, each as facts, code and its developer comment, then
// the target's facts and code, the instruction and an open "Comment:".
// When masked, the target's name is also hidden wherever it occurs in the
// exemplars (code, facts and comments) so it cannot leak back in.
RenderedPrompt render_asap(const MethodRecord& method, const std::vector<AsapExemplar>& exemplars,
                           const SemanticFacts& target_facts, bool masked);

// Single-stage strategies only (Asap needs exemplars, SummarizeExplanation's
// first stage is the Simple prompt and is rendered as such, tagged stage 1).
RenderedPrompt render_stage1(const MethodRecord& method, Strategy strategy, bool masked);

nlohmann::ordered_json to_json(const RenderedPrompt& p);
RenderedPrompt prompt_from_json(const nlohmann::json& j);

}  // namespace jdbench
