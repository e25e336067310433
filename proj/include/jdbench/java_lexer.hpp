#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jdbench::java {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String,  // string, char, and text-block literals
  Operator,
  LineComment,
  BlockComment,
  DocComment,  // /** ... */
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset;  // byte offset into the source
  std::size_t end;     // one past the last byte
  int line;            // 1-based line of the first byte

  bool is(std::string_view s) const { return text == s && kind != TokenKind::String; }
  bool is_comment() const {
    return kind == TokenKind::LineComment || kind == TokenKind::BlockComment ||
           kind == TokenKind::DocComment;
  }
};

bool is_keyword(std::string_view word);
bool is_primitive_type(std::string_view word);

// Tokenizes Java source. Comments are kept as tokens. Runs of '>' are emitted
// as single-character tokens unless they end in '=' (">=", ">>=", ">>>="), so
// nested generics close cleanly. Throws ParseError on unterminated comments or
// literals.
std::vector<Token> lex(std::string_view source);

// Same token stream with comments removed.
std::vector<Token> strip_comments(const std::vector<Token>& tokens);

}  // namespace jdbench::java
