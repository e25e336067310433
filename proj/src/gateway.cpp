#include "jdbench/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "jdbench/code_facts.hpp"

namespace jdbench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string_view status_name(GenerationStatus s) { return s == GenerationStatus::Ok ? "ok" : "failed"; }

}  // namespace

ordered_json to_json(const GenerationRecord& r) {
  ordered_json j;
  j["method_id"] = r.method_id;
  j["strategy"] = std::string(strategy_name(r.strategy));
  j["masked"] = r.masked;
  j["prompt_key"] = prompt_key(r.strategy, r.masked);
  j["model_name"] = r.model_name;
  j["status"] = std::string(status_name(r.status));
  j["attempt_count"] = r.attempt_count;
  j["latency_ms"] = r.latency_ms;
  j["stage1_output"] = r.stage1_output;
  j["raw_output"] = r.raw_output;
  j["candidate_summary"] = r.candidate_summary;
  j["error"] = r.error;
  return j;
}

GenerationRecord generation_from_json(const json& j) {
  GenerationRecord r;
  r.method_id = j.at("method_id").get<std::string>();
  auto strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (!strategy) throw DataError("unknown strategy in run record: " + j.at("strategy").dump());
  r.strategy = *strategy;
  r.masked = j.at("masked").get<bool>();
  r.model_name = j.value("model_name", "");
  const auto status = j.at("status").get<std::string>();
  if (status == "ok") {
    r.status = GenerationStatus::Ok;
  } else if (status == "failed") {
    r.status = GenerationStatus::Failed;
  } else {
    throw DataError("unknown status in run record: " + status);
  }
  r.attempt_count = j.value("attempt_count", 0);
  r.latency_ms = j.value("latency_ms", 0.0);
  r.stage1_output = j.value("stage1_output", "");
  r.raw_output = j.value("raw_output", "");
  r.candidate_summary = j.value("candidate_summary", "");
  r.error = j.value("error", "");
  return r;
}

std::string prompt_hash(std::string_view prompt_text) { return to_hex(fnv1a64(prompt_text)); }

// ---------------------------------------------------------------------------
// Mock

namespace {

constexpr std::string_view kMockVerbs[] = {"Returns", "Computes", "Creates", "Updates",
                                           "Removes", "Checks",   "Builds",  "Converts"};

// Words from the last paragraph of the prompt, which holds the code under
// summarization (or the Javadoc for the second summarization stage).
std::vector<std::string> mock_vocabulary(std::string_view prompt) {
  auto text = std::string(prompt);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  auto cut = text.rfind("\n\n");
  auto tail = cut == std::string::npos ? text : text.substr(cut + 2);
  std::vector<std::string> words;
  for (auto& t : tokenize_code(tail).tokens) {
    if (t.size() >= 3 && !std::isdigit(static_cast<unsigned char>(t[0]))) words.push_back(t);
  }
  return words;
}

}  // namespace

CompletionResult MockProvider::complete(const GenerationRequest& request) {
  SeededRng rng(fnv1a64(request.prompt_text));
  const auto vocab = mock_vocabulary(request.prompt_text);
  const bool short_form = request.prompt_text.find("JAVADOC:") != std::string::npos;
  std::ostringstream s;
  s << kMockVerbs[rng.below(std::size(kMockVerbs))] << " the";
  const std::size_t words = (short_form ? 3 : 5) + rng.below(short_form ? 4 : 8);
  if (vocab.empty()) {
    s << " value";
  } else {
    for (std::size_t i = 0; i < words; ++i) s << ' ' << vocab[rng.below(vocab.size())];
  }
  s << '.';
  CompletionResult out;
  out.ok = true;
  out.attempts = 1;
  out.text = short_form ? s.str() : "/**\n * " + s.str() + "\n */";
  return out;
}

// ---------------------------------------------------------------------------
// HTTP

std::chrono::milliseconds RetryPolicy::delay_for(int retry_index) const {
  const double ms = static_cast<double>(base_delay.count()) * std::pow(multiplier, retry_index);
  const double capped = std::min(ms, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

json LlmEndpoint::chat_template() {
  return json{{"model", "{{model}}"},
              {"messages", json::array({json{{"role", "user"}, {"content", "{{prompt}}"}}})},
              {"temperature", "{{temperature}}"},
              {"max_tokens", "{{max_tokens}}"},
              {"stop", "{{stop}}"}};
}

HttpProvider::HttpProvider(LlmEndpoint endpoint, RetryPolicy policy,
                           std::shared_ptr<HttpTransport> transport, Sleeper sleeper)
    : endpoint_(std::move(endpoint)),
      policy_(policy),
      transport_(transport ? std::move(transport) : default_transport()),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })) {
  if (endpoint_.request_template.is_null()) endpoint_.request_template = LlmEndpoint::chat_template();
  parse_url(endpoint_.url);
}

namespace {

// Returns false when the node should be dropped from its parent (an empty stop list).
bool substitute(json& node, const GenerationRequest& request, const std::string& model) {
  if (node.is_string()) {
    const auto& s = node.get_ref<const std::string&>();
    if (s == "{{prompt}}") {
      node = request.prompt_text;
    } else if (s == "{{model}}") {
      node = model;
    } else if (s == "{{temperature}}") {
      node = request.temperature;
    } else if (s == "{{max_tokens}}") {
      node = request.max_tokens;
    } else if (s == "{{stop}}") {
      if (request.stop_sequences.empty()) return false;
      node = request.stop_sequences;
    }
    return true;
  }
  if (node.is_object()) {
    std::vector<std::string> drop;
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (!substitute(it.value(), request, model)) drop.push_back(it.key());
    }
    for (const auto& k : drop) node.erase(k);
  } else if (node.is_array()) {
    json kept = json::array();
    for (auto& child : node) {
      if (substitute(child, request, model)) kept.push_back(std::move(child));
    }
    node = std::move(kept);
  }
  return true;
}

}  // namespace

std::string HttpProvider::build_body(const GenerationRequest& request) const {
  json body = endpoint_.request_template;
  const auto& model = request.model_name.empty() ? endpoint_.model : request.model_name;
  substitute(body, request, model);
  return body.dump();
}

CompletionResult HttpProvider::complete(const GenerationRequest& request) {
  const auto body = build_body(request);
  const auto headers = auth_headers(endpoint_.auth_env);
  CompletionResult out;
  const auto started = std::chrono::steady_clock::now();
  const int max_attempts = 1 + std::max(0, request.retries);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempt > 0) sleeper_(policy_.delay_for(attempt - 1));
    ++out.attempts;
    auto res = transport_->post_json(endpoint_.url, body, headers, request.timeout_seconds);
    if (res.status == 401 || res.status == 403) {
      throw ConfigError("endpoint rejected credentials (HTTP " + std::to_string(res.status) + ")");
    }
    bool retryable = false;
    if (res.transport_failure()) {
      out.error = "transport error: " + res.error;
      retryable = true;
    } else if (res.status == 429 || res.status >= 500) {
      out.error = "HTTP " + std::to_string(res.status);
      retryable = true;
    } else if (res.status != 200) {
      out.error = "HTTP " + std::to_string(res.status);
    } else {
      try {
        auto j = json::parse(res.body);
        out.text = j.at(json::json_pointer(endpoint_.response_pointer)).get<std::string>();
        out.ok = true;
        out.error.clear();
      } catch (const json::exception& e) {
        out.error = std::string("malformed response: ") + e.what();
      }
    }
    if (out.ok || !retryable) break;
  }
  out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return out;
}

// ---------------------------------------------------------------------------
// Record / replay

CompletionResult RecordingProvider::complete(const GenerationRequest& request) {
  auto res = inner_->complete(request);
  if (res.ok) {
    const auto hash = prompt_hash(request.prompt_text);
    ordered_json e;
    e["prompt_hash"] = hash;
    e["prompt"] = request.prompt_text;
    e["output"] = res.text;
    std::lock_guard lock(mu_);
    entries_[hash] = std::move(e);
  }
  return res;
}

std::string RecordingProvider::recording() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& [hash, e] : entries_) out += e.dump() + "\n";
  return out;
}

ReplayProvider::ReplayProvider(std::string_view recording_jsonl) {
  std::istringstream in{std::string(recording_jsonl)};
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      outputs_[j.at("prompt_hash").get<std::string>()] = j.at("output").get<std::string>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed replay file: ") + e.what());
    }
  }
}

CompletionResult ReplayProvider::complete(const GenerationRequest& request) {
  CompletionResult out;
  out.attempts = 1;
  auto it = outputs_.find(prompt_hash(request.prompt_text));
  if (it == outputs_.end()) {
    out.error = "prompt not in replay file";
    return out;
  }
  out.ok = true;
  out.text = it->second;
  return out;
}

// ---------------------------------------------------------------------------
// Post-processing

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::string postprocess_once(std::string_view raw) {
  std::vector<std::string> kept;
  std::istringstream in{std::string(raw)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.rfind("```", 0) == 0) continue;
    if (t.rfind("/**", 0) == 0) {
      t = trim(t.substr(3));
    } else if (t.rfind("/*", 0) == 0) {
      t = trim(t.substr(2));
    }
    if (t.size() >= 2 && t.compare(t.size() - 2, 2, "*/") == 0) t = trim(t.substr(0, t.size() - 2));
    while (!t.empty() && t[0] == '*') t = trim(t.substr(1));
    if (!t.empty() && t[0] == '@') continue;
    if (!t.empty()) kept.push_back(t);
  }
  std::string joined;
  for (const auto& k : kept) {
    if (!joined.empty()) joined += ' ';
    joined += k;
  }
  std::string text = collapse_whitespace(joined);
  static constexpr std::string_view kLabels[] = {"summary:", "javadoc:", "comment:"};
  for (bool changed = true; changed;) {
    changed = false;
    for (auto label : kLabels) {
      if (starts_with_ci(text, label)) {
        text = trim(text.substr(label.size()));
        changed = true;
      }
    }
  }
  return text;
}

}  // namespace

std::string postprocess_summary(std::string_view raw) {
  // Stripping one layer can expose another ("Summary: * foo"), so iterate to
  // a fixed point; each pass only shortens the text.
  std::string cur = postprocess_once(raw);
  for (;;) {
    std::string next = postprocess_once(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Strategy execution

RenderedPrompt build_asap_prompt(const MethodRecord& method, bool masked,
                                 const RetrievalContext& retrieval, std::vector<std::string>* notes) {
  if (!retrieval.index) throw ConfigError("ASAP prompts need a BM25 index over the training set");
  const MethodRecord target = masked ? mask_method(method) : method;
  const auto query = tokenize_code(target.code());
  const auto hits = retrieval.index->top_k(query, retrieval.exemplar_count, {method.id});
  std::vector<AsapExemplar> exemplars;
  for (const auto& hit : hits) {
    auto it = retrieval.train_by_id.find(hit.method_id);
    if (it == retrieval.train_by_id.end()) {
      throw ConfigError("index references a method missing from the training set: " + hit.method_id);
    }
    AsapExemplar ex{*it->second, analyze_method(*it->second)};
    if (notes && !ex.facts.ok) notes->push_back("facts unavailable for exemplar " + hit.method_id);
    exemplars.push_back(std::move(ex));
  }
  if (notes && exemplars.empty()) notes->push_back("no exemplars retrieved for " + method.id);
  auto facts = analyze_method(target);
  if (notes && !facts.ok) notes->push_back("facts unavailable for target " + method.id);
  return render_asap(method, exemplars, facts, masked);
}

RunOutcome run_strategy(const MethodRecord& method, Strategy strategy, bool masked,
                        const GatewayDeps& deps) {
  if (!deps.provider) throw ConfigError("no completion provider configured");
  RunOutcome out;
  auto& rec = out.record;
  rec.method_id = method.id;
  rec.strategy = strategy;
  rec.masked = masked;
  rec.model_name = deps.request_defaults.model_name;

  auto call = [&](const RenderedPrompt& prompt) {
    GenerationRequest req = deps.request_defaults;
    req.prompt_text = prompt.text;
    auto res = deps.provider->complete(req);
    rec.attempt_count += res.attempts;
    rec.latency_ms += res.latency_ms;
    if (!res.ok) {
      rec.status = GenerationStatus::Failed;
      rec.error = res.error;
      out.notes.push_back("generation failed for " + method.id + " " + prompt_key(strategy, masked) +
                          ": " + res.error);
    }
    return res;
  };

  RenderedPrompt prompt;
  if (strategy == Strategy::Asap) {
    if (!deps.retrieval) throw ConfigError("ASAP prompts need a retrieval context");
    prompt = build_asap_prompt(method, masked, *deps.retrieval, &out.notes);
  } else {
    prompt = render_stage1(method, strategy, masked);
  }

  auto first = call(prompt);
  if (!first.ok) {
    out.final_prompt = std::move(prompt);
    return out;
  }

  if (strategy == Strategy::SummarizeExplanation) {
    rec.stage1_output = trim(first.text);
    if (rec.stage1_output.empty()) {
      rec.status = GenerationStatus::Failed;
      rec.error = "empty first-stage output";
      out.notes.push_back("generation failed for " + method.id + " " + prompt_key(strategy, masked) +
                          ": empty first-stage output");
      out.final_prompt = std::move(prompt);
      return out;
    }
    prompt = render_summarize_stage2(method, masked, rec.stage1_output);
    auto second = call(prompt);
    if (!second.ok) {
      out.final_prompt = std::move(prompt);
      return out;
    }
    rec.raw_output = second.text;
  } else {
    rec.raw_output = first.text;
  }
  rec.candidate_summary = postprocess_summary(rec.raw_output);
  rec.status = GenerationStatus::Ok;
  out.final_prompt = std::move(prompt);
  return out;
}

std::vector<RunOutcome> run_sweep(const std::vector<SweepTask>& tasks, const GatewayDeps& deps,
                                  std::size_t max_in_flight) {
  std::set<std::tuple<std::string, Strategy, bool>> seen;
  for (const auto& t : tasks) {
    if (!seen.emplace(t.method->id, t.strategy, t.masked).second) {
      throw ConfigError("duplicate generation task for " + t.method->id + " " +
                        prompt_key(t.strategy, t.masked));
    }
  }
  std::vector<RunOutcome> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = run_strategy(*tasks[i].method, tasks[i].strategy, tasks[i].masked, deps);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  const auto n_workers = std::max<std::size_t>(1, std::min(max_in_flight, tasks.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace jdbench
