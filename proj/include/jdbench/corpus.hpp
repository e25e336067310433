#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace jdbench {

struct SourceFile {
  std::string path;  // relative to the scanned root, '/' separated
  std::string content;
  bool parse_ok = false;
};

struct MethodRecord {
  std::string id;
  std::string file_path;
  std::string class_name;
  std::string simple_name;
  std::string signature;
  std::vector<std::string> param_names;
  std::string body_text;
  int start_line = 0;
  int end_line = 0;
  int loc = 0;
  std::string javadoc_raw;
  std::string ground_truth_summary;

  // Signature followed by the body on the next line; this is what prompts show.
  std::string code() const { return signature + "\n" + body_text; }

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

std::string make_method_id(const std::string& file_path, const std::string& signature,
                           const std::string& body_text);

struct ScanOptions {
  std::vector<std::string> include_globs{"**/*.java"};
  std::vector<std::string> exclude_globs;
};

// Matches '/'-separated relative paths. '*' and '?' stay within one path
// segment, '**' spans any number of segments (including zero when followed by '/').
bool glob_match(std::string_view pattern, std::string_view path);

// Throws ConfigError when root does not exist. Files that cannot be read or are
// not valid UTF-8 come back with parse_ok = false.
std::vector<SourceFile> scan_project(const std::filesystem::path& root,
                                     const ScanOptions& options = {});

bool is_valid_utf8(std::string_view text);

struct ExtractStats {
  std::size_t files_skipped = 0;     // syntax errors
  std::size_t summaries_rejected = 0;  // Javadoc present but summary empty
};

// One record per method declaration with a body. Constructors are excluded.
// Methods of anonymous or local classes are attributed to the nearest named
// enclosing class. Throws ParseError when the file cannot be structured.
std::vector<MethodRecord> extract_methods(const SourceFile& file, bool require_javadoc,
                                          ExtractStats* stats = nullptr);

// Runs extract_methods over every parse_ok file, counting files that fail.
std::vector<MethodRecord> extract_all(const std::vector<SourceFile>& files, bool require_javadoc,
                                      ExtractStats& stats);

// Strips the comment delimiters and gutters from a /** ... */ block, then
// normalizes the text with normalize_summary.
std::string extract_ground_truth(std::string_view javadoc_raw);

// Cuts at the first block tag or sentence end, unwraps inline tags and
// collapses whitespace. Idempotent.
std::string normalize_summary(std::string_view text);

struct CorpusPartition {
  std::vector<MethodRecord> train;
  std::vector<MethodRecord> eval;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

// Seeded Fisher-Yates over records sorted by id; the first ceil(ratio * N)
// go to train.
CorpusPartition split_corpus(std::vector<MethodRecord> records, double ratio, std::uint64_t seed);

// Keeps loc >= min_loc, samples min(sample_size, survivors) without
// replacement, returns them sorted by loc descending then id ascending.
// Throws DataError when nothing survives the filter.
std::vector<MethodRecord> select_eval_set(std::vector<MethodRecord> records, int min_loc,
                                          std::size_t sample_size, std::uint64_t seed);

struct CorpusStats {
  std::int64_t loc_total = 0;
  std::size_t class_count = 0;
  std::size_t method_count = 0;
  std::size_t with_javadoc_count = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats corpus_stats(const std::vector<MethodRecord>& records);

// Portable uniform integer in [0, bound) from a mt19937_64 stream; rejection
// sampling keeps it identical across standard library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

nlohmann::ordered_json to_json(const MethodRecord& r);
MethodRecord method_from_json(const nlohmann::json& j);

std::string write_corpus_jsonl(const std::vector<MethodRecord>& records);
std::vector<MethodRecord> read_corpus_jsonl(const std::string& path);

}  // namespace jdbench
