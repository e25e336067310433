// Command-line front end: extract, split, select, prompts, run, score,
// compare, report, stats and an all-in-one pipeline.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "jdbench/pipeline.hpp"
#include "jdbench/prompts.hpp"

namespace fs = std::filesystem;
using namespace jdbench;
using nlohmann::ordered_json;

namespace {

std::string parent_dir(const std::string& file) {
  auto p = fs::path(file).parent_path().string();
  return p.empty() ? "." : p;
}

void write_output(const std::string& path, std::string_view content) {
  fs::create_directories(parent_dir(path));
  write_file(path, content);
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const auto& n : names) {
    if (n == "all") return {std::begin(kAllStrategies), std::end(kAllStrategies)};
    auto s = parse_strategy(n);
    if (!s) throw ConfigError("unknown strategy: " + n);
    out.push_back(*s);
  }
  if (out.empty()) throw ConfigError("no strategy given");
  return out;
}

MaskedMode parse_mode(const std::string& s) {
  auto m = parse_masked_mode(s);
  if (!m) throw ConfigError("--masked must be on, off or both");
  return *m;
}

// Flags given on the command line win over the config file.
struct RunFlags {
  std::string config;
  std::string provider, endpoint, model, auth_env, record, replay, response_pointer;
  std::optional<std::size_t> concurrency;
  std::optional<int> retries, max_tokens;
  std::optional<double> temperature, timeout;
};

RunConfig resolve_config(const RunFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.provider.empty()) c.llm.provider = f.provider;
  if (!f.endpoint.empty()) c.llm.endpoint.url = f.endpoint;
  if (!f.model.empty()) c.llm.endpoint.model = f.model;
  if (!f.auth_env.empty()) c.llm.endpoint.auth_env = f.auth_env;
  if (!f.response_pointer.empty()) c.llm.endpoint.response_pointer = f.response_pointer;
  if (!f.record.empty()) c.llm.record_file = f.record;
  if (!f.replay.empty()) {
    c.llm.replay_file = f.replay;
    if (f.provider.empty()) c.llm.provider = "replay";
  }
  if (f.concurrency) c.concurrency = *f.concurrency;
  if (f.retries) c.llm.retries = *f.retries;
  if (f.max_tokens) c.llm.max_tokens = *f.max_tokens;
  if (f.temperature) c.llm.temperature = *f.temperature;
  if (f.timeout) c.llm.timeout_seconds = *f.timeout;
  if (c.llm.provider == "http" && c.llm.endpoint.url.empty()) throw ConfigError("--endpoint is required for http");
  if (c.concurrency == 0) throw ConfigError("--concurrency must be positive");
  return c;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "YAML config file (flags override its values)");
  cmd->add_option("--provider", f.provider, "mock, http or replay")
      ->check(CLI::IsMember({"mock", "http", "replay"}));
  cmd->add_option("--endpoint", f.endpoint, "Chat-completion URL for the http provider");
  cmd->add_option("--model", f.model, "Model name sent to the endpoint");
  cmd->add_option("--auth-env", f.auth_env, "Environment variable holding a bearer token");
  cmd->add_option("--response-pointer", f.response_pointer,
                  "JSON pointer to the completion text in the response");
  cmd->add_option("--record", f.record, "Write successful http calls to this replay file");
  cmd->add_option("--replay", f.replay, "Serve completions from a replay file");
  cmd->add_option("--concurrency", f.concurrency, "Maximum requests in flight");
  cmd->add_option("--retries", f.retries, "Retries per request");
  cmd->add_option("--max-tokens", f.max_tokens, "Maximum output tokens");
  cmd->add_option("--temperature", f.temperature, "Sampling temperature");
  cmd->add_option("--timeout", f.timeout, "Per-request timeout in seconds");
}

ordered_json file_hashes(const std::map<std::string, std::string>& inputs) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, path] : inputs) j[name] = to_hex(fnv1a64(read_file(path)));
  return j;
}

int report_counts(const std::string& what, std::size_t bad) {
  if (bad == 0) return 0;
  std::cerr << what << ": " << bad << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark toolkit for LLM-generated Javadoc method summaries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  int exit_code = 0;

  // extract
  std::vector<std::string> roots, includes, excludes;
  std::string extract_out;
  bool require_javadoc = false;
  auto* extract = app.add_subcommand("extract", "Mine method records from Java source trees");
  extract->add_option("--root", roots, "Source root (repeatable)")->required();
  extract->add_option("--include", includes, "Include glob (default **/*.java)");
  extract->add_option("--exclude", excludes, "Exclude glob");
  extract->add_flag("--require-javadoc", require_javadoc, "Keep only methods with a Javadoc summary");
  extract->add_option("--out", extract_out, "Output corpus JSONL")->required();
  extract->callback([&] {
    ScanOptions scan;
    if (!includes.empty()) scan.include_globs = includes;
    scan.exclude_globs = excludes;
    auto res = extract_corpus(roots, scan, require_javadoc);
    write_output(extract_out, write_corpus_jsonl(res.records));
    auto stats = corpus_stats(res.records);
    std::cout << "methods " << stats.method_count << ", classes " << stats.class_count << ", loc "
              << stats.loc_total << ", files skipped " << res.stats.files_skipped << '\n';
    ordered_json e;
    e["roots"] = roots;
    e["corpus_hash"] = corpus_content_hash(res.records);
    e["methods"] = res.records.size();
    e["files_scanned"] = res.files_scanned;
    e["files_skipped"] = res.stats.files_skipped;
    e["summaries_rejected"] = res.stats.summaries_rejected;
    write_manifest(parent_dir(extract_out), "extract", e);
    exit_code = report_counts("files skipped with syntax errors", res.stats.files_skipped);
  });

  // split
  std::string split_in, train_out, eval_out;
  double ratio = 0.8;
  std::uint64_t split_seed = 42;
  auto* split = app.add_subcommand("split", "Seeded train/eval partition of documented methods");
  split->add_option("--corpus", split_in, "Corpus JSONL")->required();
  split->add_option("--ratio", ratio, "Training fraction")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--train-out", train_out, "Training partition JSONL")->required();
  split->add_option("--eval-out", eval_out, "Evaluation partition JSONL")->required();
  split->callback([&] {
    require_file(split_in, "corpus");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("--ratio must be in (0, 1)");
    auto docs = documented(read_corpus_jsonl(split_in));
    if (docs.empty()) throw DataError("corpus has no documented methods");
    auto parts = split_corpus(docs, ratio, split_seed);
    write_output(train_out, write_corpus_jsonl(parts.train));
    write_output(eval_out, write_corpus_jsonl(parts.eval));
    std::cout << "train " << parts.train.size() << ", eval " << parts.eval.size() << '\n';
    ordered_json e;
    e["input_hashes"] = file_hashes({{"corpus", split_in}});
    e["ratio"] = ratio;
    e["seed"] = split_seed;
    e["train_hash"] = corpus_content_hash(parts.train);
    e["eval_hash"] = corpus_content_hash(parts.eval);
    write_manifest(parent_dir(train_out), "split", e);
  });

  // select
  std::string select_in, select_out;
  int min_loc = 10;
  std::size_t sample_size = 100;
  std::uint64_t select_seed = 7;
  auto* select = app.add_subcommand("select", "Filter by LOC, sample and sort the evaluation set");
  select->add_option("--corpus", select_in, "Evaluation partition JSONL")->required();
  select->add_option("--min-loc", min_loc, "Minimum non-blank lines")->capture_default_str();
  select->add_option("--sample-size", sample_size, "Records to keep")->capture_default_str();
  select->add_option("--seed", select_seed, "Sampling seed")->capture_default_str();
  select->add_option("--out", select_out, "Selected set JSONL")->required();
  select->callback([&] {
    require_file(select_in, "corpus");
    if (sample_size == 0) throw ConfigError("--sample-size must be positive");
    auto chosen = select_eval_set(read_corpus_jsonl(select_in), min_loc, sample_size, select_seed);
    write_output(select_out, write_corpus_jsonl(chosen));
    std::cout << "selected " << chosen.size() << '\n';
    ordered_json e;
    e["input_hashes"] = file_hashes({{"corpus", select_in}});
    e["min_loc"] = min_loc;
    e["sample_size"] = sample_size;
    e["seed"] = select_seed;
    e["corpus_hash"] = corpus_content_hash(chosen);
    write_manifest(parent_dir(select_out), "select", e);
  });

  // prompts
  std::string prompts_eval, prompts_train, prompts_out, prompts_masked = "both";
  std::vector<std::string> prompts_strategies{"all"};
  auto* prompts = app.add_subcommand("prompts", "Render prompts without calling a model");
  prompts->add_option("--corpus", prompts_eval, "Methods to summarize (JSONL)")->required();
  prompts->add_option("--train", prompts_train, "Training partition for ASAP exemplars");
  prompts->add_option("--strategy", prompts_strategies, "Strategy name or all (repeatable)");
  prompts->add_option("--masked", prompts_masked, "on, off or both")->capture_default_str();
  prompts->add_option("--out", prompts_out, "Prompt JSONL")->required();
  prompts->callback([&] {
    require_file(prompts_eval, "corpus");
    auto strategies = parse_strategies(prompts_strategies);
    auto mode = parse_mode(prompts_masked);
    auto eval = read_corpus_jsonl(prompts_eval);
    std::vector<MethodRecord> train;
    std::optional<Bm25Index> index;
    RetrievalContext retrieval;
    if (std::find(strategies.begin(), strategies.end(), Strategy::Asap) != strategies.end()) {
      if (prompts_train.empty()) throw ConfigError("--train is required for the asap strategy");
      require_file(prompts_train, "training corpus");
      train = read_corpus_jsonl(prompts_train);
      index.emplace(load_or_build_index(train, (fs::path(parent_dir(prompts_out)) / "bm25_index.json").string()));
      retrieval = make_retrieval(*index, train);
    }
    auto tasks = make_tasks(eval, strategies, mode);
    auto rendered = render_prompts(tasks, retrieval);
    write_output(prompts_out, prompts_jsonl(rendered));
    std::cout << "prompts " << rendered.size() << '\n';
  });

  // run
  std::string run_eval, run_train, run_out, run_masked = "both";
  std::vector<std::string> run_strategies{"all"};
  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Generate summaries through a model provider");
  run->add_option("--corpus", run_eval, "Methods to summarize (JSONL)")->required();
  run->add_option("--train", run_train, "Training partition for ASAP exemplars");
  run->add_option("--strategy", run_strategies, "Strategy name or all (repeatable)");
  run->add_option("--masked", run_masked, "on, off or both")->capture_default_str();
  run->add_option("--out", run_out, "Run JSONL")->required();
  add_run_flags(run, run_flags);
  run->callback([&] {
    auto config = resolve_config(run_flags);
    require_file(run_eval, "corpus");
    auto strategies = parse_strategies(run_strategies);
    auto mode = parse_mode(run_masked);
    auto eval = read_corpus_jsonl(run_eval);
    std::vector<MethodRecord> train;
    std::optional<Bm25Index> index;
    RetrievalContext retrieval;
    if (std::find(strategies.begin(), strategies.end(), Strategy::Asap) != strategies.end()) {
      if (run_train.empty()) throw ConfigError("--train is required for the asap strategy");
      require_file(run_train, "training corpus");
      train = read_corpus_jsonl(run_train);
      index.emplace(load_or_build_index(train, (fs::path(parent_dir(run_out)) / "bm25_index.json").string()));
      retrieval = make_retrieval(*index, train);
    }
    std::shared_ptr<CompletionProvider> provider = make_provider(config.llm);
    std::shared_ptr<RecordingProvider> recorder;
    if (!config.llm.record_file.empty() && config.llm.provider == "http") {
      recorder = std::make_shared<RecordingProvider>(provider);
      provider = recorder;
    }
    auto tasks = make_tasks(eval, strategies, mode);
    GatewayDeps deps{provider.get(), make_request_defaults(config.llm), &retrieval};
    auto outcomes = run_sweep(tasks, deps, config.concurrency);
    std::vector<GenerationRecord> records;
    std::string log;
    std::size_t failed = 0;
    for (auto& o : outcomes) {
      if (o.record.status != GenerationStatus::Ok) ++failed;
      for (const auto& n : o.notes) log += n + "\n";
      records.push_back(std::move(o.record));
    }
    write_output(run_out, generations_jsonl(records));
    write_output(run_out + ".log", log);
    if (recorder) write_output(config.llm.record_file, recorder->recording());
    std::cout << "records " << records.size() << ", failed " << failed << '\n';
    std::map<std::string, std::string> inputs{{"corpus", run_eval}};
    if (!run_train.empty()) inputs["train"] = run_train;
    ordered_json e;
    e["config_hash"] = config_hash(config);
    e["corpus_hash"] = corpus_content_hash(eval);
    e["input_hashes"] = file_hashes(inputs);
    e["provider"] = config.llm.provider;
    e["model"] = deps.request_defaults.model_name;
    e["records"] = records.size();
    e["failed"] = failed;
    write_manifest(parent_dir(run_out), "run", e);
    exit_code = report_counts("failed generations", failed);
  });

  // score
  std::string score_run, score_corpus, score_out, embedder_kind = "hashing", embedder_url, scorer_url,
      score_config;
  auto* score = app.add_subcommand("score", "Score generated summaries against ground truth");
  score->add_option("--run", score_run, "Run JSONL")->required();
  score->add_option("--corpus", score_corpus, "Corpus JSONL holding the ground truth")->required();
  score->add_option("--out", score_out, "Scores JSONL")->required();
  score->add_option("--config", score_config, "YAML config with embedder and scorer settings");
  score->add_option("--embedder", embedder_kind, "hashing, http or none")
      ->check(CLI::IsMember({"hashing", "http", "none"}));
  score->add_option("--embedder-url", embedder_url, "Embedding endpoint for --embedder http");
  score->add_option("--scorer-url", scorer_url, "External BERTScore/BLEU-RT service");
  score->callback([&] {
    RunConfig config = score_config.empty() ? RunConfig{} : load_run_config(score_config);
    if (score->count("--embedder")) config.embedder.kind = embedder_kind;
    if (!embedder_url.empty()) config.embedder.endpoint.url = embedder_url;
    if (!scorer_url.empty()) config.scorer.url = scorer_url;
    if (config.embedder.kind == "http" && config.embedder.endpoint.url.empty()) {
      throw ConfigError("--embedder-url is required for --embedder http");
    }
    require_file(score_run, "run file");
    require_file(score_corpus, "corpus");
    auto setup = make_scoring(config.embedder, config.scorer);
    ScoreWarnings warnings;
    ScoringProviders providers{setup.embedder.get(), setup.scorer.get(), &warnings};
    auto res = score_generations(read_generations_jsonl(score_run), read_corpus_jsonl(score_corpus),
                                 providers);
    write_output(score_out, write_scores_jsonl(res.rows));
    std::cout << "scored " << res.rows.size() << ", skipped failed " << res.skipped_failed
              << ", skipped unknown " << res.skipped_unknown << '\n';
    ordered_json e;
    e["config_hash"] = config_hash(config);
    e["input_hashes"] = file_hashes({{"run", score_run}, {"corpus", score_corpus}});
    e["scored"] = res.rows.size();
    e["skipped_failed"] = res.skipped_failed;
    e["skipped_unknown"] = res.skipped_unknown;
    e["embedder_unavailable"] = warnings.embedder_unavailable.load();
    e["scorer_failures"] = warnings.scorer_failures.load();
    e["clamped_values"] = warnings.clamped_values.load();
    write_manifest(parent_dir(score_out), "score", e);
    exit_code = report_counts("records skipped", res.skipped_failed + res.skipped_unknown);
  });

  // compare
  std::string compare_scores, compare_baseline = "asap", compare_candidate, compare_masked = "off",
                              compare_out;
  auto* compare = app.add_subcommand("compare", "One-sided t and KS tests of a candidate against a baseline");
  compare->add_option("--scores", compare_scores, "Scores JSONL")->required();
  compare->add_option("--baseline", compare_baseline, "Baseline strategy")->capture_default_str();
  compare->add_option("--candidate", compare_candidate, "Candidate strategy")->required();
  compare->add_option("--masked", compare_masked, "Compare the masked (on) or unmasked (off) runs")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  compare->add_option("--out", compare_out, "Write the comparison as JSON here");
  compare->callback([&] {
    require_file(compare_scores, "scores file");
    auto c = parse_strategy(compare_candidate);
    auto b = parse_strategy(compare_baseline);
    if (!c || !b) throw ConfigError("unknown strategy");
    const bool masked = compare_masked == "on";
    auto scores = read_scores_jsonl(compare_scores);
    Report r;
    r.comparisons = compare_prompts(scores, prompt_key(*c, masked), prompt_key(*b, masked));
    std::size_t tested = 0;
    for (const auto& t : r.comparisons) tested += t.t_test.has_value();
    if (tested == 0) throw DataError("not enough scores for either prompt to run the tests");
    auto md = render_markdown(r);
    std::cout << md.substr(md.find("## Pairwise tests"));
    if (!compare_out.empty()) {
      write_output(compare_out, to_json(r)["comparisons"].dump(2) + "\n");
    }
  });

  // report
  std::string report_scores, report_format = "all", report_dir, report_baseline = "asap";
  std::vector<std::string> report_candidates{"simple", "wordrestrict", "summarizeexplanation",
                                             "ignoreexception"};
  auto* report = app.add_subcommand("report", "Aggregate tables, tests, winners and masking effect");
  report->add_option("--scores", report_scores, "Scores JSONL")->required();
  report->add_option("--format", report_format, "md, csv, json or all")
      ->check(CLI::IsMember({"md", "csv", "json", "all"}))
      ->capture_default_str();
  report->add_option("--out-dir", report_dir, "Directory for report.md/csv/json")->required();
  report->add_option("--baseline", report_baseline, "Baseline strategy")->capture_default_str();
  report->add_option("--candidate", report_candidates, "Candidate strategies (repeatable)");
  report->callback([&] {
    require_file(report_scores, "scores file");
    auto scores = read_scores_jsonl(report_scores);
    if (scores.empty()) throw DataError("scores file is empty");
    auto r = build_report(scores, make_report_options(scores, report_baseline, report_candidates));
    fs::create_directories(report_dir);
    auto path = [&](const char* name) { return (fs::path(report_dir) / name).string(); };
    if (report_format == "md" || report_format == "all") write_file(path("report.md"), render_markdown(r));
    if (report_format == "csv" || report_format == "all") write_file(path("report.csv"), render_csv(r));
    if (report_format == "json" || report_format == "all") write_file(path("report.json"), render_json(r));
    ordered_json e;
    e["input_hashes"] = file_hashes({{"scores", report_scores}});
    e["format"] = report_format;
    write_manifest(report_dir, "report", e);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  });

  // stats
  std::string stats_corpus;
  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  stats->add_option("--corpus", stats_corpus, "Corpus JSONL")->required();
  stats->callback([&] {
    require_file(stats_corpus, "corpus");
    auto records = read_corpus_jsonl(stats_corpus);
    auto s = corpus_stats(records);
    ordered_json j;
    j["methods"] = s.method_count;
    j["with_javadoc"] = s.with_javadoc_count;
    j["classes"] = s.class_count;
    j["loc_total"] = s.loc_total;
    j["corpus_hash"] = corpus_content_hash(records);
    std::cout << j.dump(2) << '\n';
  });

  // pipeline
  std::string pipeline_config, pipeline_out, pipeline_provider;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from a config file");
  pipeline->add_option("--config", pipeline_config, "YAML config file")->required();
  pipeline->add_option("--out-dir", pipeline_out, "Override output_dir");
  pipeline->add_option("--provider", pipeline_provider, "Override llm.provider")
      ->check(CLI::IsMember({"mock", "http", "replay"}));
  pipeline->callback([&] {
    auto config = load_run_config(pipeline_config);
    if (!pipeline_out.empty()) config.output_dir = pipeline_out;
    if (!pipeline_provider.empty()) config.llm.provider = pipeline_provider;
    auto s = run_pipeline(config);
    std::cout << "methods " << s.methods_extracted << ", train " << s.train_size << ", eval " << s.eval_size
              << ", selected " << s.selected << ", generations ok " << s.generations_ok << ", failed "
              << s.generations_failed << ", scored " << s.scored << '\n';
    exit_code = report_counts("failed generations", s.generations_failed);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
