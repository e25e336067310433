#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jdbench/common.hpp"
#include "jdbench/gateway.hpp"
#include "jdbench/metrics.hpp"

namespace jdbench {

enum class MaskedMode { Off, On, Both };

std::optional<MaskedMode> parse_masked_mode(std::string_view s);
std::string_view masked_mode_name(MaskedMode m);
std::vector<bool> masked_flags(MaskedMode m);  // unmasked first

struct LlmSettings {
  std::string provider = "mock";  // mock | http | replay
  LlmEndpoint endpoint;
  double temperature = 0.0;
  int max_tokens = 256;
  std::vector<std::string> stop;
  double timeout_seconds = 120.0;
  int retries = 2;
  int backoff_ms = 500;
  std::string record_file;  // http only: write a replay file
  std::string replay_file;  // replay only
};

struct EmbedderSettings {
  std::string kind = "hashing";  // hashing | http | none
  EmbedderEndpoint endpoint;
};

struct ScorerSettings {
  std::string url;  // empty: no external scorer
  std::string auth_env;
  double timeout_seconds = 60.0;
};

struct RunConfig {
  std::vector<std::string> source_roots;
  std::vector<std::string> include_globs{"**/*.java"};
  std::vector<std::string> exclude_globs;
  std::string output_dir = "out";
  double split_ratio = 0.8;
  std::uint64_t split_seed = 42;
  int min_loc = 10;
  std::size_t sample_size = 100;
  std::uint64_t select_seed = 7;
  // "eval": sample from the evaluation partition. "all": sample from the whole
  // documented corpus (exemplars still come from the training partition and
  // never include the target itself).
  std::string select_pool = "eval";
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  MaskedMode masked = MaskedMode::Both;
  std::size_t concurrency = 4;
  LlmSettings llm;
  EmbedderSettings embedder;
  ScorerSettings scorer;
  std::string baseline = "asap";
  std::vector<std::string> candidates{"simple", "wordrestrict", "summarizeexplanation",
                                      "ignoreexception"};
};

// Replaces ${VAR} and ${VAR:-default}. An unset variable without a default is
// a ConfigError.
std::string interpolate_env(std::string_view text);

// Parses YAML text. Relative source roots and output_dir resolve against base_dir.
RunConfig parse_run_config(std::string_view yaml_text, const std::string& base_dir = ".");
// Throws ConfigError when the file is missing or invalid.
RunConfig load_run_config(const std::string& path);

// Checks invariants: source roots exist, ratio in (0, 1), known strategies.
void validate_run_config(const RunConfig& config);

// Canonical form used for the manifest hash. Secrets are never stored in the
// config (only environment variable names), so nothing is redacted.
nlohmann::ordered_json to_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

}  // namespace jdbench
