#include "jdbench/prompts.hpp"

#include <sstream>

namespace jdbench {

MethodRecord mask_method(const MethodRecord& method) {
  MethodRecord m = method;
  const std::string name = method.simple_name;
  m.simple_name = std::string(kMaskToken);
  m.signature = replace_identifier(method.signature, name, kMaskToken);
  m.body_text = replace_identifier(method.body_text, name, kMaskToken);
  for (auto& p : m.param_names) {
    if (p == name) p = std::string(kMaskToken);
  }
  return m;
}

namespace {

RenderedPrompt make(const MethodRecord& method, Strategy strategy, bool masked, std::string text,
                    int stage = 1) {
  RenderedPrompt p;
  p.strategy = strategy;
  p.masked = masked;
  p.stage = stage;
  p.text = std::move(text);
  p.method_id = method.id;
  return p;
}

std::string target_code(const MethodRecord& method, bool masked) {
  return masked ? mask_method(method).code() : method.code();
}

}  // namespace

RenderedPrompt render_simple(const MethodRecord& method, bool masked) {
  std::string text;
  text += instructions::kGenerate;
  text += "\n\n";
  text += target_code(method, masked);
  text += "\n";
  return make(method, Strategy::Simple, masked, std::move(text));
}

RenderedPrompt render_word_restrict(const MethodRecord& method, bool masked) {
  std::string text;
  text += instructions::kGenerate;
  text += "\n";
  text += instructions::kWordLimit;
  text += "\n\n";
  text += target_code(method, masked);
  text += "\n";
  return make(method, Strategy::WordRestrict, masked, std::move(text));
}

RenderedPrompt render_ignore_exception(const MethodRecord& method, bool masked) {
  std::string text;
  text += instructions::kGenerate;
  text += "\n";
  text += instructions::kIgnoreHeader;
  text += "\n";
  for (auto item : instructions::kIgnoreItems) {
    text += item;
    text += "\n";
  }
  text += "\n";
  text += target_code(method, masked);
  text += "\n";
  return make(method, Strategy::IgnoreException, masked, std::move(text));
}

RenderedPrompt render_summarize_stage2(const MethodRecord& method, bool masked,
                                       std::string_view stage1_output) {
  std::string explanation = trim(stage1_output);
  // The model may have reconstructed the name from the masked code.
  if (masked) explanation = replace_identifier(explanation, method.simple_name, kMaskToken);
  if (explanation.empty()) {
    throw DataError("summarize stage 2 needs a non-empty stage 1 explanation");
  }
  std::string text;
  text += instructions::kSummarize;
  text += "\n\nJAVADOC: ";
  text += explanation;
  text += "\n";
  return make(method, Strategy::SummarizeExplanation, masked, std::move(text), 2);
}

RenderedPrompt render_asap(const MethodRecord& method, const std::vector<AsapExemplar>& exemplars,
                           const SemanticFacts& target_facts, bool masked) {
  auto hide = [&](const std::string& text) {
    return masked ? replace_identifier(text, method.simple_name, kMaskToken) : text;
  };

  std::string text;
  std::vector<std::string> ids;
  for (const auto& ex : exemplars) {
    auto facts = render_semantic_facts(ex.facts);
    if (!facts.empty()) text += hide(facts) + "\n";
    text += hide(ex.method.code());
    text += "\n";
    text += instructions::kCommentLabel;
    text += " ";
    text += hide(ex.method.ground_truth_summary);
    text += "\n\n";
    ids.push_back(ex.method.id);
  }
  auto facts = render_semantic_facts(target_facts);
  if (!facts.empty()) text += hide(facts) + "\n";
  text += target_code(method, masked);
  text += "\n";
  text += instructions::kAsap;
  text += "\n";
  text += instructions::kCommentLabel;

  auto p = make(method, Strategy::Asap, masked, std::move(text));
  p.exemplar_ids = std::move(ids);
  return p;
}

RenderedPrompt render_stage1(const MethodRecord& method, Strategy strategy, bool masked) {
  switch (strategy) {
    case Strategy::Simple: return render_simple(method, masked);
    case Strategy::WordRestrict: return render_word_restrict(method, masked);
    case Strategy::IgnoreException: return render_ignore_exception(method, masked);
    case Strategy::SummarizeExplanation: {
      auto p = render_simple(method, masked);
      p.strategy = Strategy::SummarizeExplanation;
      return p;
    }
    case Strategy::Asap: break;
  }
  throw ConfigError("the asap prompt needs exemplars; use render_asap");
}

nlohmann::ordered_json to_json(const RenderedPrompt& p) {
  nlohmann::ordered_json j;
  j["method_id"] = p.method_id;
  j["strategy"] = strategy_name(p.strategy);
  j["masked"] = p.masked;
  j["stage"] = p.stage;
  j["exemplar_ids"] = p.exemplar_ids;
  j["text"] = p.text;
  return j;
}

RenderedPrompt prompt_from_json(const nlohmann::json& j) {
  RenderedPrompt p;
  p.method_id = j.at("method_id").get<std::string>();
  auto s = parse_strategy(j.at("strategy").get<std::string>());
  if (!s) throw DataError("unknown strategy in prompt record");
  p.strategy = *s;
  p.masked = j.at("masked").get<bool>();
  p.stage = j.at("stage").get<int>();
  p.exemplar_ids = j.at("exemplar_ids").get<std::vector<std::string>>();
  p.text = j.at("text").get<std::string>();
  return p;
}

}  // namespace jdbench
