#include "jdbench/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <set>

#include <yaml-cpp/yaml.h>

namespace jdbench {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::optional<MaskedMode> parse_masked_mode(std::string_view s) {
  if (s == "off") return MaskedMode::Off;
  if (s == "on") return MaskedMode::On;
  if (s == "both") return MaskedMode::Both;
  return std::nullopt;
}

std::string_view masked_mode_name(MaskedMode m) {
  switch (m) {
    case MaskedMode::Off: return "off";
    case MaskedMode::On: return "on";
    case MaskedMode::Both: return "both";
  }
  return "both";
}

std::vector<bool> masked_flags(MaskedMode m) {
  switch (m) {
    case MaskedMode::Off: return {false};
    case MaskedMode::On: return {true};
    case MaskedMode::Both: return {false, true};
  }
  return {false, true};
}

std::string interpolate_env(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      const auto close = text.find('}', i + 2);
      if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config");
      const auto inner = std::string(text.substr(i + 2, close - i - 2));
      std::string name = inner;
      std::optional<std::string> fallback;
      if (auto sep = inner.find(":-"); sep != std::string::npos) {
        name = inner.substr(0, sep);
        fallback = inner.substr(sep + 2);
      }
      const char* value = std::getenv(name.c_str());
      if (value && *value) {
        out += value;
      } else if (fallback) {
        out += *fallback;
      } else {
        throw ConfigError("environment variable " + name + " referenced in config is not set");
      }
      i = close + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

namespace {

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& child : node) arr.push_back(yaml_to_json(child));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar: {
      const auto s = interpolate_env(node.Scalar());
      if (node.Tag() == "!") return s;  // quoted scalar stays a string
      static const std::regex kInt(R"([-+]?[0-9]+)");
      static const std::regex kFloat(R"([-+]?([0-9]+\.[0-9]*|\.[0-9]+)([eE][-+]?[0-9]+)?)");
      if (std::regex_match(s, kInt)) return std::stoll(s);
      if (std::regex_match(s, kFloat)) return std::stod(s);
      if (s == "true") return true;
      if (s == "false") return false;
      if (s == "~" || s == "null") return nullptr;
      return s;
    }
  }
  return nullptr;
}

template <typename T>
void read_into(const json& obj, const char* key, T& target) {
  if (!obj.contains(key) || obj[key].is_null()) return;
  try {
    target = obj[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError("config section '" + section + "' must be a mapping");
  for (const auto& [k, v] : obj.items()) {
    if (!known.count(k)) throw ConfigError("unknown config key: " + section + "." + k);
  }
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

RunConfig parse_run_config(std::string_view yaml_text, const std::string& base_dir) {
  json j;
  try {
    j = yaml_to_json(YAML::Load(std::string(yaml_text)));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (j.is_null()) j = json::object();
  if (!j.is_object()) throw ConfigError("config must be a mapping");

  static const std::set<std::string> kKnown = {
      "source_roots", "include", "exclude", "output_dir", "split", "select", "strategies",
      "masked", "concurrency", "llm", "embedder", "scorer", "compare"};
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.count(k)) throw ConfigError("unknown config key: " + k);
  }

  if (j.contains("split")) check_keys(j["split"], "split", {"ratio", "seed"});
  if (j.contains("select")) check_keys(j["select"], "select", {"min_loc", "sample_size", "seed", "pool"});
  if (j.contains("llm")) {
    check_keys(j["llm"], "llm",
               {"provider", "url", "model", "auth_env", "response_pointer", "request_template", "temperature",
                "max_tokens", "stop", "timeout_seconds", "retries", "backoff_ms", "record_file", "replay_file"});
  }
  if (j.contains("embedder")) {
    check_keys(j["embedder"], "embedder", {"kind", "url", "model", "auth_env", "response_pointer", "timeout_seconds"});
  }
  if (j.contains("scorer")) check_keys(j["scorer"], "scorer", {"url", "auth_env", "timeout_seconds"});
  if (j.contains("compare")) check_keys(j["compare"], "compare", {"baseline", "candidates"});

  RunConfig c;
  read_into(j, "source_roots", c.source_roots);
  for (auto& r : c.source_roots) r = resolve(base_dir, r);
  read_into(j, "include", c.include_globs);
  read_into(j, "exclude", c.exclude_globs);
  read_into(j, "output_dir", c.output_dir);
  c.output_dir = resolve(base_dir, c.output_dir);
  if (j.contains("split")) {
    const auto& s = j["split"];
    read_into(s, "ratio", c.split_ratio);
    read_into(s, "seed", c.split_seed);
  }
  if (j.contains("select")) {
    const auto& s = j["select"];
    read_into(s, "min_loc", c.min_loc);
    read_into(s, "sample_size", c.sample_size);
    read_into(s, "seed", c.select_seed);
    read_into(s, "pool", c.select_pool);
  }
  if (j.contains("strategies")) {
    std::vector<std::string> names;
    read_into(j, "strategies", names);
    c.strategies.clear();
    for (const auto& n : names) {
      auto s = parse_strategy(n);
      if (!s) throw ConfigError("unknown strategy: " + n);
      c.strategies.push_back(*s);
    }
  }
  if (j.contains("masked")) {
    // Only true/false become booleans above, so a bare on/off arrives as a string.
    std::string m = j["masked"].is_boolean() ? (j["masked"].get<bool>() ? "on" : "off")
                                             : j["masked"].get<std::string>();
    auto mode = parse_masked_mode(m);
    if (!mode) throw ConfigError("masked must be on, off or both");
    c.masked = *mode;
  }
  read_into(j, "concurrency", c.concurrency);
  if (j.contains("llm")) {
    const auto& l = j["llm"];
    read_into(l, "provider", c.llm.provider);
    read_into(l, "url", c.llm.endpoint.url);
    read_into(l, "model", c.llm.endpoint.model);
    read_into(l, "auth_env", c.llm.endpoint.auth_env);
    read_into(l, "response_pointer", c.llm.endpoint.response_pointer);
    if (l.contains("request_template")) c.llm.endpoint.request_template = l["request_template"];
    read_into(l, "temperature", c.llm.temperature);
    read_into(l, "max_tokens", c.llm.max_tokens);
    read_into(l, "stop", c.llm.stop);
    read_into(l, "timeout_seconds", c.llm.timeout_seconds);
    read_into(l, "retries", c.llm.retries);
    read_into(l, "backoff_ms", c.llm.backoff_ms);
    read_into(l, "record_file", c.llm.record_file);
    read_into(l, "replay_file", c.llm.replay_file);
    c.llm.record_file = resolve(base_dir, c.llm.record_file);
    c.llm.replay_file = resolve(base_dir, c.llm.replay_file);
  }
  if (j.contains("embedder")) {
    const auto& e = j["embedder"];
    read_into(e, "kind", c.embedder.kind);
    read_into(e, "url", c.embedder.endpoint.url);
    read_into(e, "model", c.embedder.endpoint.model);
    read_into(e, "auth_env", c.embedder.endpoint.auth_env);
    read_into(e, "response_pointer", c.embedder.endpoint.response_pointer);
    read_into(e, "timeout_seconds", c.embedder.endpoint.timeout_seconds);
  }
  if (j.contains("scorer")) {
    const auto& s = j["scorer"];
    read_into(s, "url", c.scorer.url);
    read_into(s, "auth_env", c.scorer.auth_env);
    read_into(s, "timeout_seconds", c.scorer.timeout_seconds);
  }
  if (j.contains("compare")) {
    const auto& s = j["compare"];
    read_into(s, "baseline", c.baseline);
    read_into(s, "candidates", c.candidates);
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path);
  const auto base = fs::path(path).parent_path().string();
  return parse_run_config(read_file(path), base.empty() ? "." : base);
}

void validate_run_config(const RunConfig& c) {
  if (c.source_roots.empty()) throw ConfigError("no source roots configured");
  for (const auto& r : c.source_roots) {
    if (!fs::is_directory(r)) throw ConfigError("source root does not exist: " + r);
  }
  if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
  if (c.min_loc < 0) throw ConfigError("min_loc must be non-negative");
  if (c.sample_size == 0) throw ConfigError("sample_size must be positive");
  if (c.select_pool != "eval" && c.select_pool != "all") throw ConfigError("select.pool must be eval or all");
  if (c.strategies.empty()) throw ConfigError("no strategies configured");
  if (c.concurrency == 0) throw ConfigError("concurrency must be positive");
  if (c.llm.provider != "mock" && c.llm.provider != "http" && c.llm.provider != "replay") {
    throw ConfigError("llm.provider must be mock, http or replay");
  }
  if (c.llm.provider == "http" && c.llm.endpoint.url.empty()) throw ConfigError("llm.url is required for http");
  if (c.llm.provider == "replay" && c.llm.replay_file.empty()) {
    throw ConfigError("llm.replay_file is required for replay");
  }
  if (c.embedder.kind != "hashing" && c.embedder.kind != "http" && c.embedder.kind != "none") {
    throw ConfigError("embedder.kind must be hashing, http or none");
  }
  if (c.embedder.kind == "http" && c.embedder.endpoint.url.empty()) {
    throw ConfigError("embedder.url is required for http");
  }
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["source_roots"] = c.source_roots;
  j["include"] = c.include_globs;
  j["exclude"] = c.exclude_globs;
  j["output_dir"] = c.output_dir;
  j["split"] = {{"ratio", c.split_ratio}, {"seed", c.split_seed}};
  j["select"] = {{"min_loc", c.min_loc}, {"sample_size", c.sample_size}, {"seed", c.select_seed},
                 {"pool", c.select_pool}};
  j["strategies"] = ordered_json::array();
  for (auto s : c.strategies) j["strategies"].push_back(std::string(strategy_name(s)));
  j["masked"] = std::string(masked_mode_name(c.masked));
  j["concurrency"] = c.concurrency;
  ordered_json llm;
  llm["provider"] = c.llm.provider;
  llm["url"] = c.llm.endpoint.url;
  llm["model"] = c.llm.endpoint.model;
  llm["auth_env"] = c.llm.endpoint.auth_env;
  llm["response_pointer"] = c.llm.endpoint.response_pointer;
  llm["request_template"] = c.llm.endpoint.request_template;
  llm["temperature"] = c.llm.temperature;
  llm["max_tokens"] = c.llm.max_tokens;
  llm["stop"] = c.llm.stop;
  llm["timeout_seconds"] = c.llm.timeout_seconds;
  llm["retries"] = c.llm.retries;
  llm["backoff_ms"] = c.llm.backoff_ms;
  llm["record_file"] = c.llm.record_file;
  llm["replay_file"] = c.llm.replay_file;
  j["llm"] = std::move(llm);
  j["embedder"] = {{"kind", c.embedder.kind},
                   {"url", c.embedder.endpoint.url},
                   {"model", c.embedder.endpoint.model},
                   {"auth_env", c.embedder.endpoint.auth_env},
                   {"response_pointer", c.embedder.endpoint.response_pointer},
                   {"timeout_seconds", c.embedder.endpoint.timeout_seconds}};
  j["scorer"] = {{"url", c.scorer.url}, {"auth_env", c.scorer.auth_env},
                 {"timeout_seconds", c.scorer.timeout_seconds}};
  j["compare"] = {{"baseline", c.baseline}, {"candidates", c.candidates}};
  return j;
}

// The output location does not change what a run produces, so it stays out of the hash.
std::string config_hash(const RunConfig& c) {
  auto j = to_json(c);
  j.erase("output_dir");
  return to_hex(fnv1a64(j.dump()));
}

}  // namespace jdbench
