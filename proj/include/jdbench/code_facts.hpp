#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jdbench/corpus.hpp"

namespace jdbench {

struct IdentifierFacts {
  std::vector<std::string> params;
  std::vector<std::string> locals;  // first-declaration order

  friend bool operator==(const IdentifierFacts&, const IdentifierFacts&) = default;
};

// One definition site and the reads it reaches. Lines are relative to the
// method's signature line (which is line 0).
struct DefUseFact {
  std::string var;
  int def_line = 0;
  std::vector<int> use_lines;  // ascending, no duplicates

  friend bool operator==(const DefUseFact&, const DefUseFact&) = default;
};

struct SemanticFacts {
  IdentifierFacts identifiers;
  std::vector<DefUseFact> def_use;
  bool ok = true;  // false when the body could not be analyzed
};

struct TokenStream {
  std::vector<std::string> tokens;

  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

// Params come from the record; locals are found by scanning the body for
// local variable, for/for-each, catch, try-resource and pattern declarations.
// Throws ParseError when the body does not lex or its brackets do not balance.
IdentifierFacts extract_identifiers(const MethodRecord& method);

// Lexical, path-insensitive def-use over params and locals. A definition is a
// parameter, an initialized declaration, an implicit binding (for-each, catch,
// pattern) or an assignment; it reaches every later read of the name up to the
// next definition. Assignments take effect after their right-hand side, so in
// `x = x + 1` the read belongs to the previous definition.
std::vector<DefUseFact> extract_def_use(const MethodRecord& method);

// Both analyses; on ParseError returns empty facts with ok = false.
SemanticFacts analyze_method(const MethodRecord& method);

// "Identifiers: a, b" followed by one "DataFlow: v defined@L used@L1,L2" line
// per fact that has at least one use. Empty sections are omitted.
std::string render_semantic_facts(const IdentifierFacts& ids, const std::vector<DefUseFact>& facts);
std::string render_semantic_facts(const SemanticFacts& facts);

// Splits on non-alphanumerics, camel/Pascal humps and letter-digit
// boundaries, then lowercases. "HTTP2Client" -> http, 2, client.
TokenStream tokenize_code(std::string_view text);

}  // namespace jdbench
