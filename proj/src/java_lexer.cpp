#include "jdbench/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "jdbench/common.hpp"

namespace jdbench::java {

namespace {

constexpr auto kKeywords = std::to_array<std::string_view>({
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "null"});

// Longest first so that maximal munch works by scanning in order.
constexpr auto kOperators = std::to_array<std::string_view>({
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=",   "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", "+",  "-",  "*",  "/",  "%",
    "="});

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end() ||
         word == "true" || word == "false";
}

bool is_primitive_type(std::string_view word) {
  return word == "int" || word == "long" || word == "short" || word == "byte" ||
         word == "char" || word == "boolean" || word == "float" || word == "double" ||
         word == "void";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = src.size();

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end, int start_line) {
    tokens.push_back(Token{kind, std::string(src.substr(begin, end - begin)), begin, end,
                           start_line});
  };
  auto count_lines = [&](std::size_t begin, std::size_t end) {
    line += static_cast<int>(std::count(src.begin() + static_cast<std::ptrdiff_t>(begin),
                                        src.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
  };

  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    const int start_line = line;

    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      push(TokenKind::LineComment, start, i, start_line);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) {
        throw ParseError("unterminated block comment at line " + std::to_string(start_line));
      }
      i = close + 2;
      // "/**/" is an empty block comment, not a doc comment.
      bool doc = start + 2 < n && src[start + 2] == '*' && close > start + 2;
      count_lines(start, i);
      push(doc ? TokenKind::DocComment : TokenKind::BlockComment, start, i, start_line);
      continue;
    }
    if (c == '"') {
      if (src.substr(i, 3) == "\"\"\"") {
        std::size_t j = i + 3;
        while (true) {
          if (j >= n) throw ParseError("unterminated text block at line " + std::to_string(start_line));
          if (src[j] == '\\') {
            j += 2;
            continue;
          }
          if (src.substr(j, 3) == "\"\"\"") break;
          ++j;
        }
        i = j + 3;
      } else {
        std::size_t j = i + 1;
        while (true) {
          if (j >= n || src[j] == '\n') {
            throw ParseError("unterminated string literal at line " + std::to_string(start_line));
          }
          if (src[j] == '\\') {
            j += 2;
            continue;
          }
          if (src[j] == '"') break;
          ++j;
        }
        i = j + 1;
      }
      count_lines(start, i);
      push(TokenKind::String, start, i, start_line);
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (true) {
        if (j >= n || src[j] == '\n') {
          throw ParseError("unterminated char literal at line " + std::to_string(start_line));
        }
        if (src[j] == '\\') {
          j += 2;
          continue;
        }
        if (src[j] == '\'') break;
        ++j;
      }
      i = j + 1;
      push(TokenKind::String, start, i, start_line);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_part(src[i])) ++i;
      auto word = src.substr(start, i - start);
      push(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, i, start_line);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < n) {
        char d = src[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          // exponent sign: 1e-5, 0x1p+3
          if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') && i + 1 < n &&
              (src[i + 1] == '+' || src[i + 1] == '-')) {
            i += 2;
            continue;
          }
          ++i;
        } else {
          break;
        }
      }
      push(TokenKind::Number, start, i, start_line);
      continue;
    }
    if (c == '>') {
      std::size_t j = i;
      while (j < n && src[j] == '>') ++j;
      if (j < n && src[j] == '=' && j - i <= 3 && !(j + 1 < n && src[j + 1] == '=')) {
        i = j + 1;
        push(TokenKind::Operator, start, i, start_line);
      } else {
        ++i;
        push(TokenKind::Operator, start, i, start_line);
      }
      continue;
    }
    bool matched = false;
    for (auto op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        i += op.size();
        push(TokenKind::Operator, start, i, start_line);
        matched = true;
        break;
      }
    }
    if (!matched) {
      ++i;
      push(TokenKind::Operator, start, i, start_line);
    }
  }
  return tokens;
}

std::vector<Token> strip_comments(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!t.is_comment()) out.push_back(t);
  }
  return out;
}

}  // namespace jdbench::java
