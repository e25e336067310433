#include "jdbench/code_facts.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "jdbench/common.hpp"
#include "jdbench/java_lexer.hpp"

namespace jdbench {

using java::Token;
using java::TokenKind;

namespace {

enum class EventKind { Use, Def };

struct Event {
  std::size_t pos;  // token index the event is ordered at
  EventKind kind;
  std::size_t seq;
  std::string name;
  int line;
};

struct Declaration {
  std::string name;
  std::size_t name_pos;
  bool defines = false;       // has an initializer or an implicit binding
  std::size_t def_pos = 0;    // where the definition takes effect
};

class BodyAnalyzer {
 public:
  explicit BodyAnalyzer(const MethodRecord& method) : method_(method) {
    toks_ = java::strip_comments(java::lex(method.body_text));
    match_brackets();
    auto newlines = std::count(method.body_text.begin(), method.body_text.end(), '\n');
    line_base_ = method.end_line - static_cast<int>(newlines) - method.start_line;
    find_declarations();
  }

  IdentifierFacts identifiers() const {
    IdentifierFacts ids;
    for (const auto& p : method_.param_names) {
      if (std::find(ids.params.begin(), ids.params.end(), p) == ids.params.end()) {
        ids.params.push_back(p);
      }
    }
    for (const auto& d : decls_) {
      if (std::find(ids.locals.begin(), ids.locals.end(), d.name) == ids.locals.end()) {
        ids.locals.push_back(d.name);
      }
    }
    return ids;
  }

  std::vector<DefUseFact> def_use() const {
    std::set<std::string> tracked(method_.param_names.begin(), method_.param_names.end());
    for (const auto& d : decls_) tracked.insert(d.name);

    std::vector<Event> events;
    std::size_t seq = 0;
    auto add = [&](std::size_t pos, EventKind kind, const std::string& name, int line) {
      events.push_back(Event{pos, kind, seq++, name, line});
    };

    // Parameters are defined on the signature line before any body token.
    for (const auto& p : method_.param_names) add(0, EventKind::Def, p, 0);

    std::set<std::size_t> decl_names;
    for (const auto& d : decls_) {
      decl_names.insert(d.name_pos);
      if (d.defines) add(d.def_pos + 1, EventKind::Def, d.name, line_of(d.name_pos));
    }

    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (t.kind != TokenKind::Identifier || !tracked.count(t.text)) continue;
      if (decl_names.count(i)) continue;
      if (!is_variable_reference(i)) continue;

      const int line = line_of(i);
      const std::size_t pos = i + 1;
      if (is(i + 1, "=")) {
        add(expression_end(i + 2) + 1, EventKind::Def, t.text, line);
      } else if (is_compound_assignment(i + 1)) {
        add(pos, EventKind::Use, t.text, line);
        add(expression_end(i + 2) + 1, EventKind::Def, t.text, line);
      } else if (is(i + 1, "++") || is(i + 1, "--") || (i > 0 && (is(i - 1, "++") || is(i - 1, "--")))) {
        add(pos, EventKind::Use, t.text, line);
        add(pos, EventKind::Def, t.text, line);
      } else {
        add(pos, EventKind::Use, t.text, line);
      }
    }

    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      if (a.pos != b.pos) return a.pos < b.pos;
      if (a.kind != b.kind) return a.kind == EventKind::Use;
      return a.seq < b.seq;
    });

    std::vector<DefUseFact> facts;
    std::map<std::string, std::size_t> active;
    for (const auto& e : events) {
      if (e.kind == EventKind::Def) {
        active[e.name] = facts.size();
        facts.push_back(DefUseFact{e.name, e.line, {}});
      } else if (auto it = active.find(e.name); it != active.end()) {
        auto& uses = facts[it->second].use_lines;
        if (std::find(uses.begin(), uses.end(), e.line) == uses.end()) uses.push_back(e.line);
      }
    }
    for (auto& f : facts) std::sort(f.use_lines.begin(), f.use_lines.end());
    std::stable_sort(facts.begin(), facts.end(), [](const DefUseFact& a, const DefUseFact& b) {
      if (a.def_line != b.def_line) return a.def_line < b.def_line;
      return a.var < b.var;
    });
    return facts;
  }

 private:
  const MethodRecord& method_;
  std::vector<Token> toks_;
  std::vector<std::size_t> match_;
  int line_base_ = 0;
  std::vector<Declaration> decls_;

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool is(std::size_t i, std::string_view s) const { return i < toks_.size() && toks_[i].is(s); }
  bool ident(std::size_t i) const {
    return i < toks_.size() && toks_[i].kind == TokenKind::Identifier;
  }
  int line_of(std::size_t i) const { return line_base_ + toks_[i].line - 1; }

  void match_brackets() {
    match_.assign(toks_.size(), kNone);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& s = toks_[i].text;
      if (toks_[i].kind != TokenKind::Operator) continue;
      if (s == "(" || s == "{" || s == "[") {
        stack.push_back(i);
      } else if (s == ")" || s == "}" || s == "]") {
        const char want = s == ")" ? '(' : s == "}" ? '{' : '[';
        if (stack.empty() || toks_[stack.back()].text[0] != want) {
          throw ParseError("unbalanced method body in " + method_.simple_name);
        }
        match_[stack.back()] = i;
        match_[i] = stack.back();
        stack.pop_back();
      }
    }
    if (!stack.empty()) throw ParseError("unbalanced method body in " + method_.simple_name);
  }

  bool is_compound_assignment(std::size_t i) const {
    static constexpr std::string_view kOps[] = {"+=", "-=", "*=", "/=", "%=", "&=",
                                                "|=", "^=", "<<=", ">>=", ">>>="};
    return i < toks_.size() && toks_[i].kind == TokenKind::Operator &&
           std::find(std::begin(kOps), std::end(kOps), toks_[i].text) != std::end(kOps);
  }

  // Index of the token that terminates the expression starting at `from`:
  // a ',' or ';' at depth zero, or the closing bracket of the enclosing group.
  std::size_t expression_end(std::size_t from) const {
    std::size_t i = from;
    while (i < toks_.size()) {
      const auto& t = toks_[i];
      if (t.kind == TokenKind::Operator) {
        if (t.text == "(" || t.text == "[" || t.text == "{") {
          i = match_[i] + 1;
          continue;
        }
        if (t.text == ")" || t.text == "]" || t.text == "}" || t.text == ";" || t.text == ",") {
          return i;
        }
      }
      ++i;
    }
    return toks_.size();
  }

  bool is_variable_reference(std::size_t i) const {
    if (i > 0) {
      const auto& p = toks_[i - 1];
      if (p.is(".") || p.is("::") || p.is("@") || p.is("new") || p.is("break") ||
          p.is("continue")) {
        return false;
      }
    }
    if (is(i + 1, "(")) return false;  // method call
    if (is(i + 1, ":") && i > 0 && is_statement_start(i)) return false;  // label
    return true;
  }

  bool is_statement_start(std::size_t i) const {
    if (i == 0) return false;
    const auto& p = toks_[i - 1];
    if (p.is("{") || p.is("}") || p.is(";") || p.is(":")) return true;
    if (p.is("(") && i >= 2) {
      return toks_[i - 2].is("for") || toks_[i - 2].is("catch") || toks_[i - 2].is("try");
    }
    return false;
  }

  // Parses a type starting at k. Returns the index after it, or kNone.
  std::size_t parse_type(std::size_t k) const {
    if (k >= toks_.size()) return kNone;
    const auto& t = toks_[k];
    bool primitive = t.kind == TokenKind::Keyword && java::is_primitive_type(t.text) && t.text != "void";
    if (!primitive && t.kind != TokenKind::Identifier) return kNone;
    ++k;
    while (true) {
      if (is(k, "<")) {
        int depth = 0;
        do {
          const auto& g = toks_[k];
          if (g.is("<")) {
            ++depth;
          } else if (g.is(">")) {
            --depth;
          } else if (!(g.kind == TokenKind::Identifier || g.is(".") || g.is(",") || g.is("?") ||
                       g.is("extends") || g.is("super") || g.is("&") || g.is("[") || g.is("]") ||
                       (g.kind == TokenKind::Keyword && java::is_primitive_type(g.text)))) {
            return kNone;
          }
          ++k;
        } while (k < toks_.size() && depth > 0);
        if (depth != 0) return kNone;
      }
      if (is(k, ".") && ident(k + 1)) {
        k += 2;
        continue;
      }
      break;
    }
    while (is(k, "[") && is(k + 1, "]")) k += 2;
    return k;
  }

  std::size_t skip_modifiers(std::size_t k) const {
    while (k < toks_.size()) {
      if (is(k, "final")) {
        ++k;
      } else if (is(k, "@") && ident(k + 1)) {
        k += 2;
        while (is(k, ".") && ident(k + 1)) k += 2;
        if (is(k, "(")) k = match_[k] + 1;
      } else {
        break;
      }
    }
    return k;
  }

  // Declarators after the type: `a = 1, b, c[] = {..}`; stops at ';' or ')'.
  void parse_declarators(std::size_t k, bool in_for_header) {
    while (ident(k)) {
      Declaration d{toks_[k].text, k};
      std::size_t n = k + 1;
      while (is(n, "[") && is(n + 1, "]")) n += 2;
      if (is(n, "=")) {
        d.defines = true;
        d.def_pos = expression_end(n + 1);
        n = d.def_pos;
      } else if (is(n, ":") && in_for_header) {
        d.defines = true;
        d.def_pos = k;
      }
      decls_.push_back(d);
      if (is(n, ",")) {
        k = n + 1;
        continue;
      }
      break;
    }
  }

  void find_declarations() {
    for (std::size_t i = 1; i < toks_.size(); ++i) {
      // pattern binding: x instanceof Foo f
      if (toks_[i - 1].is("instanceof")) {
        std::size_t k = parse_type(skip_modifiers(i));
        if (k != kNone && ident(k) && !is(k + 1, "(") && !is(k + 1, ".")) {
          decls_.push_back(Declaration{toks_[k].text, k, true, k});
        }
        continue;
      }
      if (!is_statement_start(i)) continue;

      const bool for_header = toks_[i - 1].is("(") && i >= 2 && toks_[i - 2].is("for");
      const bool catch_header = toks_[i - 1].is("(") && i >= 2 && toks_[i - 2].is("catch");
      std::size_t k = skip_modifiers(i);

      if (catch_header) {
        k = parse_type(k);
        while (k != kNone && is(k, "|")) k = parse_type(k + 1);
        if (k != kNone && ident(k) && is(k + 1, ")")) {
          decls_.push_back(Declaration{toks_[k].text, k, true, k});
        }
        continue;
      }

      std::size_t after_type = parse_type(k);
      if (after_type == kNone || !ident(after_type)) continue;
      std::size_t n = after_type + 1;
      while (is(n, "[") && is(n + 1, "]")) n += 2;
      const bool looks_like_decl = is(n, "=") || is(n, ";") || is(n, ",") ||
                                   (for_header && is(n, ":")) ||
                                   (toks_[i - 1].is("(") && is(n, ")"));
      if (!looks_like_decl) continue;
      parse_declarators(after_type, for_header);
    }
  }
};

}  // namespace

IdentifierFacts extract_identifiers(const MethodRecord& method) {
  return BodyAnalyzer(method).identifiers();
}

std::vector<DefUseFact> extract_def_use(const MethodRecord& method) {
  return BodyAnalyzer(method).def_use();
}

SemanticFacts analyze_method(const MethodRecord& method) {
  SemanticFacts facts;
  try {
    BodyAnalyzer analyzer(method);
    facts.identifiers = analyzer.identifiers();
    facts.def_use = analyzer.def_use();
  } catch (const ParseError&) {
    facts = SemanticFacts{};
    facts.ok = false;
  }
  return facts;
}

std::string render_semantic_facts(const IdentifierFacts& ids, const std::vector<DefUseFact>& facts) {
  std::ostringstream out;
  bool any = false;
  if (!ids.params.empty() || !ids.locals.empty()) {
    out << "Identifiers: ";
    bool first = true;
    for (const auto* list : {&ids.params, &ids.locals}) {
      for (const auto& name : *list) {
        if (!first) out << ", ";
        out << name;
        first = false;
      }
    }
    any = true;
  }
  for (const auto& f : facts) {
    if (f.use_lines.empty()) continue;  // a definition nobody reads carries no flow
    if (any) out << '\n';
    out << "DataFlow: " << f.var << " defined@" << f.def_line << " used@";
    for (std::size_t k = 0; k < f.use_lines.size(); ++k) {
      if (k) out << ',';
      out << f.use_lines[k];
    }
    any = true;
  }
  return out.str();
}

std::string render_semantic_facts(const SemanticFacts& facts) {
  return render_semantic_facts(facts.identifiers, facts.def_use);
}

TokenStream tokenize_code(std::string_view text) {
  TokenStream out;
  auto is_alnum = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::isalnum(u);
  };
  auto is_upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  auto is_lower = [](char c) { return c >= 'a' && c <= 'z'; };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alnum(text[j])) ++j;
    auto word = text.substr(i, j - i);

    std::size_t start = 0;
    for (std::size_t k = 1; k <= word.size(); ++k) {
      bool boundary = k == word.size();
      if (!boundary) {
        char a = word[k - 1], b = word[k];
        boundary = (is_lower(a) && is_upper(b)) || (is_digit(a) != is_digit(b)) ||
                   (is_upper(a) && is_upper(b) && k + 1 < word.size() && is_lower(word[k + 1]));
      }
      if (boundary) {
        std::string tok(word.substr(start, k - start));
        for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!tok.empty()) out.tokens.push_back(std::move(tok));
        start = k;
      }
    }
    i = j;
  }
  return out;
}

}  // namespace jdbench
