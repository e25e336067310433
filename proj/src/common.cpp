#include "jdbench/common.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace jdbench {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string content_hash(std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool first = true;
  for (auto part : parts) {
    if (!first) h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(part, h);
    first = false;
  }
  return to_hex(h);
}

bool is_ident_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool is_ident_part(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

namespace {

template <typename OnMatch>
void for_each_identifier(std::string_view text, OnMatch&& on_match) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ident_start(text[i]) && (i == 0 || !is_ident_part(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_ident_part(text[j])) ++j;
      on_match(i, j);
      i = j;
    } else {
      ++i;
    }
  }
}

}  // namespace

std::string replace_identifier(std::string_view text, std::string_view name,
                               std::string_view replacement) {
  std::string out;
  out.reserve(text.size());
  std::size_t copied = 0;
  for_each_identifier(text, [&](std::size_t b, std::size_t e) {
    if (text.substr(b, e - b) == name) {
      out.append(text.substr(copied, b - copied));
      out.append(replacement);
      copied = e;
    }
  });
  out.append(text.substr(copied));
  return out;
}

bool contains_identifier(std::string_view text, std::string_view name) {
  bool found = false;
  for_each_identifier(text, [&](std::size_t b, std::size_t e) {
    if (text.substr(b, e - b) == name) found = true;
  });
  return found;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Simple: return "simple";
    case Strategy::WordRestrict: return "wordrestrict";
    case Strategy::SummarizeExplanation: return "summarizeexplanation";
    case Strategy::IgnoreException: return "ignoreexception";
    case Strategy::Asap: return "asap";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string prompt_key(Strategy s, bool masked) {
  std::string key(strategy_name(s));
  if (masked) key += "_masked";
  return key;
}

}  // namespace jdbench
