#include "jdbench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <span>
#include <sstream>

#include "jdbench/common.hpp"
#include "jdbench/java_lexer.hpp"

namespace jdbench {

namespace fs = std::filesystem;
using java::Token;
using java::TokenKind;

std::string make_method_id(const std::string& file_path, const std::string& signature,
                           const std::string& body_text) {
  return content_hash({file_path, signature, body_text});
}

// ---------------------------------------------------------------------------
// Scanning

namespace {

bool glob_segments(std::span<const std::string> pat, std::span<const std::string> path);

bool segment_match(std::string_view pat, std::string_view s) {
  if (pat.empty()) return s.empty();
  if (pat[0] == '*') {
    for (std::size_t k = 0; k <= s.size(); ++k) {
      if (segment_match(pat.substr(1), s.substr(k))) return true;
    }
    return false;
  }
  if (s.empty()) return false;
  if (pat[0] == '?' || pat[0] == s[0]) return segment_match(pat.substr(1), s.substr(1));
  return false;
}

bool glob_segments(std::span<const std::string> pat, std::span<const std::string> path) {
  if (pat.empty()) return path.empty();
  if (pat[0] == "**") {
    for (std::size_t k = 0; k <= path.size(); ++k) {
      if (glob_segments(pat.subspan(1), path.subspan(k))) return true;
    }
    return false;
  }
  if (path.empty()) return false;
  return segment_match(pat[0], path[0]) && glob_segments(pat.subspan(1), path.subspan(1));
}

std::vector<std::string> split_path(std::string_view p) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= p.size()) {
    auto slash = p.find('/', start);
    if (slash == std::string_view::npos) slash = p.size();
    if (slash > start) out.emplace_back(p.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  auto pat = split_path(pattern);
  auto segs = split_path(path);
  return glob_segments(pat, segs);
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // overlong encodings, surrogates, out of range
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::vector<SourceFile> scan_project(const fs::path& root, const ScanOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw ConfigError("source root does not exist or is not a directory: " + root.string());
  }
  std::vector<std::string> rel_paths;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied,
                                                  ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file(ec)) continue;
    auto rel = fs::relative(it->path(), root, ec).generic_string();
    bool included = std::any_of(options.include_globs.begin(), options.include_globs.end(),
                                [&](const std::string& g) { return glob_match(g, rel); });
    bool excluded = std::any_of(options.exclude_globs.begin(), options.exclude_globs.end(),
                                [&](const std::string& g) { return glob_match(g, rel); });
    if (included && !excluded) rel_paths.push_back(rel);
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<SourceFile> files;
  files.reserve(rel_paths.size());
  for (const auto& rel : rel_paths) {
    SourceFile f;
    f.path = rel;
    std::ifstream in(root / rel, std::ios::binary);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      f.content = ss.str();
      f.parse_ok = !f.content.empty() && is_valid_utf8(f.content);
      if (f.parse_ok) {
        try {
          java::lex(f.content);
        } catch (const ParseError&) {
          f.parse_ok = false;
        }
      }
    }
    files.push_back(std::move(f));
  }
  return files;
}

// ---------------------------------------------------------------------------
// Ground truth

namespace {

constexpr std::string_view kBlockTags[] = {
    "param",  "return", "returns",    "throws",     "exception", "see",     "since",
    "author", "version", "deprecated", "serial",    "serialData", "serialField",
    "apiNote", "implSpec", "implNote", "hidden"};

bool block_tag_at(std::string_view text, std::size_t p) {
  if (text[p] != '@') return false;
  if (p > 0 && !std::isspace(static_cast<unsigned char>(text[p - 1]))) return false;
  std::size_t e = p + 1;
  while (e < text.size() && std::isalpha(static_cast<unsigned char>(text[e]))) ++e;
  auto name = text.substr(p + 1, e - p - 1);
  return std::find(std::begin(kBlockTags), std::end(kBlockTags), name) != std::end(kBlockTags);
}

std::string unwrap_inline_tags(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{' && i + 1 < text.size() && text[i + 1] == '@') {
      std::size_t j = i + 2;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      int depth = 1;
      std::size_t k = j;
      while (k < text.size() && depth > 0) {
        if (text[k] == '{') ++depth;
        if (text[k] == '}') --depth;
        if (depth > 0) ++k;
      }
      if (depth == 0) {
        out += trim(text.substr(j, k - j));
        i = k + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

}  // namespace

std::string normalize_summary(std::string_view text) {
  std::string_view cut = text;
  for (std::size_t p = 0; p < cut.size(); ++p) {
    if (block_tag_at(cut, p)) {
      cut = cut.substr(0, p);
      break;
    }
  }
  std::string unwrapped = unwrap_inline_tags(cut);
  for (std::size_t p = 0; p < unwrapped.size(); ++p) {
    if (unwrapped[p] == '.' &&
        (p + 1 == unwrapped.size() || std::isspace(static_cast<unsigned char>(unwrapped[p + 1])))) {
      unwrapped.resize(p + 1);
      break;
    }
  }
  return collapse_whitespace(unwrapped);
}

std::string extract_ground_truth(std::string_view raw) {
  std::string_view body = raw;
  if (body.substr(0, 3) == "/**") body.remove_prefix(3);
  if (body.size() >= 2 && body.substr(body.size() - 2) == "*/") body.remove_suffix(2);

  std::string stripped;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    if (nl == std::string_view::npos) nl = body.size();
    auto line = body.substr(start, nl - start);
    std::size_t k = 0;
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    while (k < line.size() && line[k] == '*') ++k;
    stripped.append(line.substr(k));
    stripped.push_back('\n');
    start = nl + 1;
  }
  return normalize_summary(stripped);
}

// ---------------------------------------------------------------------------
// Method extraction

namespace {

bool is_modifier(const Token& t) {
  static constexpr std::string_view kMods[] = {
      "public", "private",   "protected",    "static",   "final",   "abstract",
      "native", "synchronized", "transient", "volatile", "strictfp", "default"};
  if (t.kind == TokenKind::Keyword) {
    return std::find(std::begin(kMods), std::end(kMods), t.text) != std::end(kMods);
  }
  return t.kind == TokenKind::Identifier && t.text == "sealed";
}

class JavaStructureParser {
 public:
  JavaStructureParser(const SourceFile& file, bool require_javadoc, ExtractStats* stats)
      : file_(file), require_javadoc_(require_javadoc), stats_(stats) {
    auto all = java::lex(file.content);
    const Token* last_comment = nullptr;
    for (const auto& tok : all) {
      if (tok.is_comment()) {
        last_comment = &tok;
        comments_.push_back(tok);
        continue;
      }
      preceding_doc_.push_back(last_comment && last_comment->kind == TokenKind::DocComment
                                   ? std::optional<std::string>(last_comment->text)
                                   : std::nullopt);
      last_comment = nullptr;
      toks_.push_back(tok);
    }
    match_brackets();
    index_lines();
  }

  std::vector<MethodRecord> run() {
    std::size_t i = 0;
    while (i < toks_.size()) {
      std::size_t next = i + 1;
      if (auto decl = class_decl_at(i)) {
        parse_class_body(decl->body_open, decl->name, decl->is_enum);
        next = match_[decl->body_open] + 1;
      }
      i = next;
    }
    return std::move(out_);
  }

 private:
  struct ClassDecl {
    std::string name;
    std::size_t body_open;
    bool is_enum;
  };

  const SourceFile& file_;
  bool require_javadoc_;
  ExtractStats* stats_;
  std::vector<Token> toks_;
  std::vector<Token> comments_;
  std::vector<std::optional<std::string>> preceding_doc_;
  std::vector<std::size_t> match_;
  std::vector<bool> blank_line_;  // indexed by 1-based line
  std::vector<MethodRecord> out_;

  bool is(std::size_t i, std::string_view s) const { return i < toks_.size() && toks_[i].is(s); }
  bool ident(std::size_t i) const {
    return i < toks_.size() && toks_[i].kind == TokenKind::Identifier;
  }

  void match_brackets() {
    match_.assign(toks_.size(), std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (t.kind != TokenKind::Operator) continue;
      if (t.text == "(" || t.text == "{" || t.text == "[") {
        stack.push_back(i);
      } else if (t.text == ")" || t.text == "}" || t.text == "]") {
        static constexpr auto opener = [](char c) { return c == ')' ? '(' : c == '}' ? '{' : '['; };
        if (stack.empty() || toks_[stack.back()].text[0] != opener(t.text[0])) {
          throw ParseError("unbalanced '" + t.text + "' at line " + std::to_string(t.line));
        }
        match_[stack.back()] = i;
        match_[i] = stack.back();
        stack.pop_back();
      }
    }
    if (!stack.empty()) {
      throw ParseError("unclosed '" + toks_[stack.back()].text + "' at line " +
                       std::to_string(toks_[stack.back()].line));
    }
  }

  void index_lines() {
    blank_line_.assign(1, true);
    bool blank = true;
    for (char c : file_.content) {
      if (c == '\n') {
        blank_line_.push_back(blank);
        blank = true;
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
      }
    }
    blank_line_.push_back(blank);
  }

  int count_loc(int first, int last) const {
    int n = 0;
    for (int l = first; l <= last && l < static_cast<int>(blank_line_.size()); ++l) {
      if (!blank_line_[static_cast<std::size_t>(l)]) ++n;
    }
    return n;
  }

  std::string_view slice(std::size_t first_tok, std::size_t last_tok) const {
    auto b = toks_[first_tok].offset;
    auto e = toks_[last_tok].end;
    return std::string_view(file_.content).substr(b, e - b);
  }

  // class/interface/enum/record/@interface declaration whose keyword is at i.
  std::optional<ClassDecl> class_decl_at(std::size_t i) const {
    const auto& t = toks_[i];
    bool after_dot = i > 0 && toks_[i - 1].is(".");
    bool keyword = (t.is("class") || t.is("interface") || t.is("enum")) &&
                   t.kind == TokenKind::Keyword && !after_dot;
    bool record = t.kind == TokenKind::Identifier && t.text == "record" && ident(i + 1) &&
                  (is(i + 2, "(") || is(i + 2, "<"));
    if (!(keyword || record) || !ident(i + 1)) return std::nullopt;
    std::size_t j = i + 2;
    while (j < toks_.size() && !is(j, "{")) {
      if (is(j, ";")) return std::nullopt;
      if (is(j, "(") || is(j, "[")) j = match_[j];
      ++j;
    }
    if (j >= toks_.size()) return std::nullopt;
    return ClassDecl{toks_[i + 1].text, j, t.is("enum")};
  }

  // Skips an annotation starting at '@'; returns the index after it.
  std::size_t skip_annotation(std::size_t k) const {
    ++k;  // '@'
    while (ident(k) || is(k, ".")) ++k;
    if (is(k, "(")) k = match_[k] + 1;
    return k;
  }

  void parse_class_body(std::size_t open, const std::string& class_name, bool is_enum) {
    const std::size_t close = match_[open];
    std::size_t j = open + 1;

    if (is_enum) {
      while (j < close) {
        if (is(j, ";")) {
          ++j;
          break;
        }
        if (is(j, "(")) {
          j = match_[j] + 1;
        } else if (is(j, "{")) {
          parse_class_body(j, class_name, false);
          j = match_[j] + 1;
        } else if (is(j, "@")) {
          j = skip_annotation(j);
        } else {
          ++j;
        }
      }
    }

    while (j < close) {
      if (is(j, ";")) {
        ++j;
        continue;
      }
      if (is(j, "{")) {
        scan_code(j, match_[j], class_name);
        j = match_[j] + 1;
        continue;
      }
      if (is(j, "static") && is(j + 1, "{")) {
        scan_code(j + 1, match_[j + 1], class_name);
        j = match_[j + 1] + 1;
        continue;
      }

      const std::size_t member_start = j;
      std::size_t k = j;
      std::size_t sig_begin = j;
      bool seen_non_annotation = false;
      while (k < close) {
        if (is(k, "@") && !is(k + 1, "interface")) {
          k = skip_annotation(k);
          if (!seen_non_annotation) sig_begin = k;
          continue;
        }
        if (is_modifier(toks_[k])) {
          seen_non_annotation = true;
          ++k;
          continue;
        }
        if (ident(k) && toks_[k].text == "non" && is(k + 1, "-") && ident(k + 2)) {
          seen_non_annotation = true;
          k += 3;
          continue;
        }
        break;
      }
      if (k >= close) break;

      std::size_t decl_kw = is(k, "@") ? k + 1 : k;
      if (auto decl = class_decl_at(decl_kw)) {
        parse_class_body(decl->body_open, decl->name, decl->is_enum);
        j = match_[decl->body_open] + 1;
        continue;
      }

      std::size_t m = k;
      while (m < close && !is(m, "(") && !is(m, "=") && !is(m, ";") && !is(m, "{")) {
        if (is(m, "[")) m = match_[m];
        ++m;
      }
      if (m >= close) break;

      if (is(m, "(") && m > k && ident(m - 1)) {
        j = parse_method(member_start, sig_begin, m, close, class_name);
        continue;
      }
      if (is(m, "{")) {
        // compact record constructor or an unrecognized block member
        scan_code(m, match_[m], class_name);
        j = match_[m] + 1;
        continue;
      }
      // field declaration, possibly with initializers holding anonymous classes
      std::size_t e = m;
      while (e < close && !is(e, ";")) {
        if (is(e, "(") || is(e, "{") || is(e, "[")) {
          if (is(e, "{") || is(e, "(")) scan_code(e, match_[e], class_name);
          e = match_[e];
        } else if (is(e, "new")) {
          e = scan_new(e, class_name);
          continue;
        }
        ++e;
      }
      j = e + 1;
    }
  }

  std::size_t parse_method(std::size_t member_start, std::size_t sig_begin, std::size_t paren,
                           std::size_t limit, const std::string& class_name) {
    const std::size_t name_idx = paren - 1;
    const std::size_t params_close = match_[paren];
    std::size_t k = params_close + 1;
    while (k < limit && !is(k, "{") && !is(k, ";")) {
      if (is(k, "(") || is(k, "[")) k = match_[k];
      ++k;
    }
    if (k >= limit || is(k, ";")) return k + 1;  // abstract, interface, or annotation member

    const std::size_t body_open = k;
    const std::size_t body_close = match_[body_open];
    const std::string& name = toks_[name_idx].text;
    bool constructor = name == class_name;

    if (!constructor) emit_method(member_start, sig_begin, name_idx, paren, body_open, class_name);
    scan_code(body_open, body_close, class_name);
    return body_close + 1;
  }

  void emit_method(std::size_t member_start, std::size_t sig_begin, std::size_t name_idx,
                   std::size_t paren, std::size_t body_open, const std::string& class_name) {
    const auto& doc = preceding_doc_[member_start];
    if (require_javadoc_ && !doc) return;

    MethodRecord r;
    r.file_path = file_.path;
    r.class_name = class_name;
    r.simple_name = toks_[name_idx].text;
    r.signature = collapse_whitespace(slice(sig_begin, body_open - 1));
    r.body_text = std::string(slice(body_open, match_[body_open]));
    r.param_names = param_names(paren);
    r.start_line = toks_[sig_begin].line;
    r.end_line = toks_[match_[body_open]].line;
    r.loc = count_loc(r.start_line, r.end_line);
    if (doc) {
      r.javadoc_raw = *doc;
      r.ground_truth_summary = extract_ground_truth(*doc);
      if (r.ground_truth_summary.empty()) {
        if (stats_) ++stats_->summaries_rejected;
        if (require_javadoc_) return;
      }
    }
    r.id = make_method_id(r.file_path, r.signature, r.body_text);
    out_.push_back(std::move(r));
  }

  std::vector<std::string> param_names(std::size_t open) const {
    std::vector<std::string> names;
    const std::size_t close = match_[open];
    std::string last_ident;
    int angle = 0;
    for (std::size_t i = open + 1; i <= close; ++i) {
      if (i == close || (angle == 0 && is(i, ","))) {
        if (!last_ident.empty()) names.push_back(last_ident);
        last_ident.clear();
        continue;
      }
      if (is(i, "@")) {
        i = skip_annotation(i) - 1;
        continue;
      }
      if (is(i, "(") || is(i, "[")) {
        i = match_[i];
        continue;
      }
      if (is(i, "<")) ++angle;
      if (is(i, ">")) --angle;
      if (angle == 0 && ident(i)) last_ident = toks_[i].text;
      if (angle == 0 && is(i, "this")) last_ident.clear();  // receiver parameter
    }
    return names;
  }

  // At a `new` token. Descends into an anonymous class body when present.
  // Returns the index to continue scanning from.
  std::size_t scan_new(std::size_t i, const std::string& class_name) {
    std::size_t k = i + 1;
    while (is(k, "@")) k = skip_annotation(k);
    while (k < toks_.size()) {
      if (ident(k) || is(k, ".") || toks_[k].kind == TokenKind::Keyword) {
        ++k;
      } else if (is(k, "<")) {
        int angle = 0;
        do {
          if (is(k, "<")) ++angle;
          if (is(k, ">")) --angle;
          ++k;
        } while (k < toks_.size() && angle > 0 && !is(k, "(") && !is(k, ";"));
      } else {
        break;
      }
    }
    if (is(k, "(")) {
      std::size_t p = match_[k];
      if (is(p + 1, "{")) {
        scan_code(k, p, class_name);
        parse_class_body(p + 1, class_name, false);
        return match_[p + 1] + 1;
      }
    }
    return i + 1;
  }

  // Walks statements and expressions looking for anonymous and local classes.
  void scan_code(std::size_t open, std::size_t close, const std::string& class_name) {
    std::size_t i = open + 1;
    while (i < close) {
      if (auto decl = class_decl_at(i)) {
        parse_class_body(decl->body_open, decl->name, decl->is_enum);
        i = match_[decl->body_open] + 1;
        continue;
      }
      if (is(i, "new")) {
        i = scan_new(i, class_name);
        continue;
      }
      ++i;
    }
  }
};

}  // namespace

std::vector<MethodRecord> extract_methods(const SourceFile& file, bool require_javadoc,
                                          ExtractStats* stats) {
  if (!file.parse_ok) throw ParseError("file is not parseable: " + file.path);
  JavaStructureParser parser(file, require_javadoc, stats);
  return parser.run();
}

std::vector<MethodRecord> extract_all(const std::vector<SourceFile>& files, bool require_javadoc,
                                      ExtractStats& stats) {
  std::vector<MethodRecord> out;
  for (const auto& f : files) {
    if (!f.parse_ok) {
      ++stats.files_skipped;
      continue;
    }
    try {
      auto records = extract_methods(f, require_javadoc, &stats);
      out.insert(out.end(), std::make_move_iterator(records.begin()),
                 std::make_move_iterator(records.end()));
    } catch (const ParseError&) {
      ++stats.files_skipped;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partitioning and selection

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

namespace {

void sort_by_id(std::vector<MethodRecord>& records) {
  std::sort(records.begin(), records.end(), [](const MethodRecord& a, const MethodRecord& b) {
    return std::tie(a.id, a.file_path, a.start_line) < std::tie(b.id, b.file_path, b.start_line);
  });
}

}  // namespace

CorpusPartition split_corpus(std::vector<MethodRecord> records, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
  if (records.empty()) throw DataError("cannot split an empty corpus");
  sort_by_id(records);
  SeededRng rng(seed);
  for (std::size_t i = records.size() - 1; i > 0; --i) {
    std::swap(records[i], records[rng.below(i + 1)]);
  }
  const auto n = records.size();
  auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  n_train = std::min(n_train, n);

  CorpusPartition part;
  part.seed = seed;
  part.ratio = ratio;
  part.train.assign(std::make_move_iterator(records.begin()),
                    std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n_train)));
  part.eval.assign(std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n_train)),
                   std::make_move_iterator(records.end()));
  return part;
}

std::vector<MethodRecord> select_eval_set(std::vector<MethodRecord> records, int min_loc,
                                          std::size_t sample_size, std::uint64_t seed) {
  std::erase_if(records, [&](const MethodRecord& r) { return r.loc < min_loc; });
  if (records.empty()) {
    throw DataError("no methods with at least " + std::to_string(min_loc) + " lines survive the filter");
  }
  sort_by_id(records);
  const std::size_t k = std::min(sample_size, records.size());
  SeededRng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(records[i], records[i + rng.below(records.size() - i)]);
  }
  records.resize(k);
  std::sort(records.begin(), records.end(), [](const MethodRecord& a, const MethodRecord& b) {
    if (a.loc != b.loc) return a.loc > b.loc;
    return a.id < b.id;
  });
  return records;
}

CorpusStats corpus_stats(const std::vector<MethodRecord>& records) {
  CorpusStats s;
  std::set<std::string> classes;
  for (const auto& r : records) {
    s.loc_total += r.loc;
    classes.insert(r.class_name);
    ++s.method_count;
    if (!r.javadoc_raw.empty()) ++s.with_javadoc_count;
  }
  s.class_count = classes.size();
  return s;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json to_json(const MethodRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["file_path"] = r.file_path;
  j["class_name"] = r.class_name;
  j["simple_name"] = r.simple_name;
  j["signature"] = r.signature;
  j["param_names"] = r.param_names;
  j["body_text"] = r.body_text;
  j["start_line"] = r.start_line;
  j["end_line"] = r.end_line;
  j["loc"] = r.loc;
  j["javadoc_raw"] = r.javadoc_raw;
  j["ground_truth_summary"] = r.ground_truth_summary;
  return j;
}

MethodRecord method_from_json(const nlohmann::json& j) {
  MethodRecord r;
  r.id = j.at("id").get<std::string>();
  r.file_path = j.at("file_path").get<std::string>();
  r.class_name = j.at("class_name").get<std::string>();
  r.simple_name = j.at("simple_name").get<std::string>();
  r.signature = j.at("signature").get<std::string>();
  r.param_names = j.at("param_names").get<std::vector<std::string>>();
  r.body_text = j.at("body_text").get<std::string>();
  r.start_line = j.at("start_line").get<int>();
  r.end_line = j.at("end_line").get<int>();
  r.loc = j.at("loc").get<int>();
  r.javadoc_raw = j.value("javadoc_raw", "");
  r.ground_truth_summary = j.value("ground_truth_summary", "");
  return r;
}

std::string write_corpus_jsonl(const std::vector<MethodRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<MethodRecord> read_corpus_jsonl(const std::string& path) {
  std::vector<MethodRecord> records;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    try {
      records.push_back(method_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ": malformed record on line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return records;
}

}  // namespace jdbench
