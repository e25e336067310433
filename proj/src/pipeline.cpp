#include "jdbench/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "jdbench/prompts.hpp"

namespace jdbench {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

ExtractResult extract_corpus(const std::vector<std::string>& roots, const ScanOptions& options,
                             bool require_javadoc) {
  ExtractResult out;
  std::vector<SourceFile> files;
  for (const auto& root : roots) {
    auto scanned = scan_project(root, options);
    if (roots.size() > 1) {
      // Keep paths (and therefore ids) distinct across roots.
      const auto prefix = fs::path(root).lexically_normal().filename().string();
      for (auto& f : scanned) f.path = prefix + "/" + f.path;
    }
    files.insert(files.end(), std::make_move_iterator(scanned.begin()),
                 std::make_move_iterator(scanned.end()));
  }
  out.files_scanned = files.size();
  out.records = extract_all(files, require_javadoc, out.stats);
  std::set<std::string> ids;
  for (const auto& r : out.records) {
    if (!ids.insert(r.id).second) throw DataError("duplicate method id " + r.id + " in " + r.file_path);
  }
  return out;
}

std::vector<MethodRecord> documented(const std::vector<MethodRecord>& records) {
  std::vector<MethodRecord> out;
  for (const auto& r : records) {
    if (!r.ground_truth_summary.empty()) out.push_back(r);
  }
  return out;
}

Bm25Index load_or_build_index(const std::vector<MethodRecord>& train, const std::string& sidecar_path) {
  const auto hash = corpus_content_hash(train);
  if (!sidecar_path.empty() && fs::is_regular_file(sidecar_path)) {
    try {
      return Bm25Index::from_json(json::parse(read_file(sidecar_path)), hash);
    } catch (const ConfigError&) {
      // stale sidecar; rebuilt below
    } catch (const json::exception&) {
    }
  }
  auto index = Bm25Index::build(train);
  if (!sidecar_path.empty()) write_file(sidecar_path, index.to_json(hash).dump() + "\n");
  return index;
}

RetrievalContext make_retrieval(const Bm25Index& index, const std::vector<MethodRecord>& train) {
  RetrievalContext ctx;
  ctx.index = &index;
  for (const auto& r : train) ctx.train_by_id[r.id] = &r;
  return ctx;
}

std::vector<SweepTask> make_tasks(const std::vector<MethodRecord>& eval,
                                  const std::vector<Strategy>& strategies, MaskedMode masked) {
  std::vector<SweepTask> tasks;
  for (const auto& m : eval) {
    for (auto s : strategies) {
      for (bool flag : masked_flags(masked)) tasks.push_back({&m, s, flag});
    }
  }
  return tasks;
}

std::vector<RenderedPrompt> render_prompts(const std::vector<SweepTask>& tasks,
                                           const RetrievalContext& retrieval) {
  std::vector<RenderedPrompt> out;
  for (const auto& t : tasks) {
    if (t.strategy == Strategy::Asap) {
      out.push_back(build_asap_prompt(*t.method, t.masked, retrieval));
    } else {
      out.push_back(render_stage1(*t.method, t.strategy, t.masked));
    }
  }
  return out;
}

std::unique_ptr<CompletionProvider> make_provider(const LlmSettings& settings) {
  if (settings.provider == "mock") return std::make_unique<MockProvider>();
  if (settings.provider == "replay") {
    if (!fs::is_regular_file(settings.replay_file)) {
      throw ConfigError("replay file not found: " + settings.replay_file);
    }
    return std::make_unique<ReplayProvider>(read_file(settings.replay_file));
  }
  if (settings.provider == "http") {
    RetryPolicy policy;
    policy.base_delay = std::chrono::milliseconds(settings.backoff_ms);
    return std::make_unique<HttpProvider>(settings.endpoint, policy);
  }
  throw ConfigError("unknown provider: " + settings.provider);
}

GenerationRequest make_request_defaults(const LlmSettings& settings) {
  GenerationRequest r;
  r.model_name = settings.provider == "mock" ? "mock" : settings.endpoint.model;
  r.temperature = settings.temperature;
  r.max_tokens = settings.max_tokens;
  r.stop_sequences = settings.stop;
  r.timeout_seconds = settings.timeout_seconds;
  r.retries = settings.retries;
  return r;
}

ScoreResult score_generations(const std::vector<GenerationRecord>& generations,
                              const std::vector<MethodRecord>& corpus, const ScoringProviders& providers) {
  std::map<std::string, const MethodRecord*> by_id;
  for (const auto& r : corpus) by_id[r.id] = &r;
  ScoreResult out;
  for (const auto& g : generations) {
    if (g.status != GenerationStatus::Ok) {
      ++out.skipped_failed;
      continue;
    }
    auto it = by_id.find(g.method_id);
    if (it == by_id.end() || it->second->ground_truth_summary.empty()) {
      ++out.skipped_unknown;
      continue;
    }
    out.rows.push_back({g.method_id, g.strategy, g.masked,
                        score_record(g, it->second->ground_truth_summary, providers)});
  }
  return out;
}

ScoringSetup make_scoring(const EmbedderSettings& embedder, const ScorerSettings& scorer) {
  ScoringSetup s;
  if (embedder.kind == "hashing") {
    s.embedder = std::make_unique<HashingEmbedder>();
  } else if (embedder.kind == "http") {
    s.embedder = std::make_unique<HttpEmbedder>(embedder.endpoint);
  } else if (embedder.kind != "none") {
    throw ConfigError("unknown embedder kind: " + embedder.kind);
  }
  if (!scorer.url.empty()) {
    s.scorer = std::make_unique<HttpExternalScorer>(
        ScorerEndpoint{scorer.url, scorer.auth_env, scorer.timeout_seconds});
  }
  return s;
}

ReportOptions make_report_options(const std::vector<ScoreRow>& scores, const std::string& baseline,
                                  const std::vector<std::string>& candidates) {
  std::set<std::string> keys;
  for (const auto& r : scores) keys.insert(r.key());
  ReportOptions o;
  for (const auto& c : candidates) {
    for (bool masked : {false, true}) {
      auto cs = parse_strategy(c);
      auto bs = parse_strategy(baseline);
      if (!cs || !bs) throw ConfigError("unknown strategy in comparison: " + c + " vs " + baseline);
      auto ck = prompt_key(*cs, masked), bk = prompt_key(*bs, masked);
      if (ck != bk && keys.count(ck) && keys.count(bk)) o.comparisons.emplace_back(ck, bk);
    }
  }
  for (auto s : kAllStrategies) {
    if (keys.count(prompt_key(s, false)) && keys.count(prompt_key(s, true))) {
      o.masking_strategies.push_back(s);
    }
  }
  // Best-prompt counts compare strategies as the model normally sees them,
  // i.e. with the real method name; masking has its own section.
  for (const auto& k : keys) {
    if (k.find("_masked") == std::string::npos) o.winner_keys.push_back(k);
  }
  return o;
}

void write_manifest(const std::string& dir, const std::string& command, ordered_json entry) {
  const auto path = (fs::path(dir) / "manifest.json").string();
  ordered_json m;
  if (fs::is_regular_file(path)) {
    try {
      m = ordered_json::parse(read_file(path));
    } catch (const json::exception&) {
      m = ordered_json();
    }
  }
  if (!m.is_object()) m = ordered_json::object();
  m["tool"] = "jdbench";
  m["version"] = std::string(kToolVersion);
  if (!m.contains("commands") || !m["commands"].is_object()) m["commands"] = ordered_json::object();
  m["commands"][command] = std::move(entry);
  // Keep command entries in a stable order no matter which ran first.
  ordered_json sorted = ordered_json::object();
  std::vector<std::string> names;
  for (const auto& [k, v] : m["commands"].items()) names.push_back(k);
  std::sort(names.begin(), names.end());
  for (const auto& n : names) sorted[n] = m["commands"][n];
  m["commands"] = std::move(sorted);
  write_file(path, m.dump(2) + "\n");
}

std::string generations_jsonl(const std::vector<GenerationRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

std::vector<GenerationRecord> read_generations_jsonl(const std::string& path) {
  std::vector<GenerationRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    try {
      out.push_back(generation_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(path + ": malformed run record on line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string prompts_jsonl(const std::vector<RenderedPrompt>& prompts) {
  std::string out;
  for (const auto& p : prompts) out += to_json(p).dump() + "\n";
  return out;
}

PipelineSummary run_pipeline(const RunConfig& config) {
  validate_run_config(config);
  fs::create_directories(config.output_dir);
  auto out_path = [&](const char* name) { return (fs::path(config.output_dir) / name).string(); };
  PipelineSummary summary;

  ScanOptions scan;
  scan.include_globs = config.include_globs;
  scan.exclude_globs = config.exclude_globs;
  auto extracted = extract_corpus(config.source_roots, scan, false);
  summary.methods_extracted = extracted.records.size();
  write_file(out_path("corpus.jsonl"), write_corpus_jsonl(extracted.records));

  auto docs = documented(extracted.records);
  if (docs.size() < 2) throw DataError("fewer than two documented methods; nothing to split");
  auto parts = split_corpus(docs, config.split_ratio, config.split_seed);
  summary.train_size = parts.train.size();
  summary.eval_size = parts.eval.size();
  write_file(out_path("train.jsonl"), write_corpus_jsonl(parts.train));
  write_file(out_path("eval.jsonl"), write_corpus_jsonl(parts.eval));

  auto pool = config.select_pool == "all" ? docs : parts.eval;
  auto selected = select_eval_set(pool, config.min_loc, config.sample_size, config.select_seed);
  summary.selected = selected.size();
  write_file(out_path("selected.jsonl"), write_corpus_jsonl(selected));

  auto index = load_or_build_index(parts.train, out_path("bm25_index.json"));
  auto retrieval = make_retrieval(index, parts.train);
  auto tasks = make_tasks(selected, config.strategies, config.masked);
  write_file(out_path("prompts.jsonl"), prompts_jsonl(render_prompts(tasks, retrieval)));

  auto base_provider = make_provider(config.llm);
  CompletionProvider* provider = base_provider.get();
  std::shared_ptr<RecordingProvider> recorder;
  std::shared_ptr<CompletionProvider> shared_base;
  if (!config.llm.record_file.empty() && config.llm.provider == "http") {
    shared_base = std::move(base_provider);
    recorder = std::make_shared<RecordingProvider>(shared_base);
    provider = recorder.get();
  }
  GatewayDeps deps{provider, make_request_defaults(config.llm), &retrieval};
  auto outcomes = run_sweep(tasks, deps, config.concurrency);
  std::vector<GenerationRecord> generations;
  std::string log;
  for (auto& o : outcomes) {
    (o.record.status == GenerationStatus::Ok ? summary.generations_ok : summary.generations_failed)++;
    for (const auto& n : o.notes) log += n + "\n";
    generations.push_back(std::move(o.record));
  }
  write_file(out_path("run.jsonl"), generations_jsonl(generations));
  write_file(out_path("run.log"), log);
  if (recorder) write_file(config.llm.record_file, recorder->recording());

  auto scoring = make_scoring(config.embedder, config.scorer);
  ScoreWarnings warnings;
  ScoringProviders providers{scoring.embedder.get(), scoring.scorer.get(), &warnings};
  auto scored = score_generations(generations, selected, providers);
  summary.scored = scored.rows.size();
  write_file(out_path("scores.jsonl"), write_scores_jsonl(scored.rows));

  auto report = build_report(scored.rows,
                             make_report_options(scored.rows, config.baseline, config.candidates));
  write_file(out_path("report.md"), render_markdown(report));
  write_file(out_path("report.csv"), render_csv(report));
  write_file(out_path("report.json"), render_json(report));

  ordered_json entry;
  entry["config_hash"] = config_hash(config);
  entry["corpus_hash"] = corpus_content_hash(extracted.records);
  entry["train_hash"] = corpus_content_hash(parts.train);
  entry["counts"] = {{"files_scanned", extracted.files_scanned},
                     {"files_skipped", extracted.stats.files_skipped},
                     {"methods", summary.methods_extracted},
                     {"train", summary.train_size},
                     {"eval", summary.eval_size},
                     {"selected", summary.selected},
                     {"generations_ok", summary.generations_ok},
                     {"generations_failed", summary.generations_failed},
                     {"scored", summary.scored},
                     {"embedder_unavailable", warnings.embedder_unavailable.load()},
                     {"scorer_failures", warnings.scorer_failures.load()}};
  write_manifest(config.output_dir, "pipeline", std::move(entry));
  return summary;
}

}  // namespace jdbench
