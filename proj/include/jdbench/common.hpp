#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jdbench {

// Bad flags, missing files, unusable endpoints. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recoverable problems with the data itself (empty selections, failed records).
// The CLI maps these to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a. Stable across platforms, used for record ids and content hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t value);

// Hash of several fields separated by NUL so that ("ab","c") != ("a","bc").
std::string content_hash(std::initializer_list<std::string_view> parts);

// Java identifier character test. Bytes >= 0x80 are treated as identifier
// characters so UTF-8 encoded letters stay inside one identifier.
bool is_ident_start(char c);
bool is_ident_part(char c);

// Replace every whole-identifier occurrence of `name` in `text`.
std::string replace_identifier(std::string_view text, std::string_view name,
                               std::string_view replacement);

// True when `name` appears in `text` delimited by non-identifier characters.
bool contains_identifier(std::string_view text, std::string_view name);

std::string collapse_whitespace(std::string_view text);
std::string trim(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Lines of a JSONL file, skipping blank lines.
std::vector<std::string> read_lines(const std::string& path);

enum class Strategy { Simple, WordRestrict, SummarizeExplanation, IgnoreException, Asap };

inline constexpr Strategy kAllStrategies[] = {Strategy::Simple, Strategy::WordRestrict,
                                              Strategy::SummarizeExplanation,
                                              Strategy::IgnoreException, Strategy::Asap};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

// "wordrestrict" or "wordrestrict_masked"
std::string prompt_key(Strategy s, bool masked);

}  // namespace jdbench
