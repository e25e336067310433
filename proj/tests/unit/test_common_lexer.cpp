#include <gtest/gtest.h>

#include "jdbench/common.hpp"
#include "jdbench/java_lexer.hpp"

using namespace jdbench;

TEST(Common, FnvKnownVectors) {
  // Published FNV-1a 64-bit test vectors.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(to_hex(0xabcULL), "0000000000000abc");
}

TEST(Common, ContentHashSeparatesFields) {
  EXPECT_NE(content_hash({"ab", "c"}), content_hash({"a", "bc"}));
  EXPECT_EQ(content_hash({"x", "y"}), content_hash({"x", "y"}));
}

TEST(Common, ReplaceIdentifierWholeWordsOnly) {
  EXPECT_EQ(replace_identifier("remove(x); removeAll(); this.remove = 1; \"remove\"", "remove", "MASKED"),
            "MASKED(x); removeAll(); this.MASKED = 1; \"MASKED\"");
  EXPECT_EQ(replace_identifier("_remove remove_ remove$ remove2", "remove", "M"),
            "_remove remove_ remove$ remove2");
  EXPECT_TRUE(contains_identifier("a.remove()", "remove"));
  EXPECT_FALSE(contains_identifier("removeAll()", "remove"));
  EXPECT_FALSE(contains_identifier("", "remove"));
}

TEST(Common, WhitespaceHelpers) {
  EXPECT_EQ(collapse_whitespace("  a \n\t b  "), "a b");
  EXPECT_EQ(trim("\n x y \t"), "x y");
  EXPECT_EQ(trim(""), "");
}

TEST(Common, StrategyNamesRoundTrip) {
  for (auto s : kAllStrategies) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
    EXPECT_EQ(prompt_key(s, true), std::string(strategy_name(s)) + "_masked");
    EXPECT_EQ(prompt_key(s, false), strategy_name(s));
  }
  EXPECT_EQ(strategy_name(Strategy::SummarizeExplanation), "summarizeexplanation");
  EXPECT_FALSE(parse_strategy("Simple").has_value());
}

TEST(Lexer, TokenKindsAndLines) {
  auto toks = java::lex("/** doc */\nint x = 0x1F; // c\nString s = \"a\\\"b\";\nchar c = '}';");
  ASSERT_FALSE(toks.empty());
  EXPECT_EQ(toks[0].kind, java::TokenKind::DocComment);
  EXPECT_EQ(toks[1].text, "int");
  EXPECT_EQ(toks[1].kind, java::TokenKind::Keyword);
  EXPECT_EQ(toks[1].line, 2);
  bool saw_hex = false, saw_string = false, saw_char = false;
  for (const auto& t : toks) {
    if (t.text == "0x1F") saw_hex = t.kind == java::TokenKind::Number;
    if (t.text == "\"a\\\"b\"") saw_string = t.kind == java::TokenKind::String;
    if (t.text == "'}'") saw_char = t.kind == java::TokenKind::String;
  }
  EXPECT_TRUE(saw_hex);
  EXPECT_TRUE(saw_string);
  EXPECT_TRUE(saw_char);
  auto stripped = java::strip_comments(toks);
  for (const auto& t : stripped) EXPECT_FALSE(t.is_comment());
}

TEST(Lexer, NestedGenericsCloseCleanly) {
  auto toks = java::strip_comments(java::lex("Map<String, List<Integer>> m; x >>= 2; y >= 1;"));
  int closers = 0;
  for (const auto& t : toks) closers += t.is(">") ? 1 : 0;
  EXPECT_EQ(closers, 2);
  bool shift_assign = false, ge = false;
  for (const auto& t : toks) {
    shift_assign |= t.is(">>=");
    ge |= t.is(">=");
  }
  EXPECT_TRUE(shift_assign);
  EXPECT_TRUE(ge);
}

TEST(Lexer, TextBlocksAndUnterminated) {
  auto toks = java::lex("String t = \"\"\"\n  hi }\n  \"\"\";");
  bool block = false;
  for (const auto& t : toks) block |= t.kind == java::TokenKind::String && t.text.rfind("\"\"\"", 0) == 0;
  EXPECT_TRUE(block);
  EXPECT_THROW(java::lex("/* never closed"), ParseError);
  EXPECT_THROW(java::lex("String s = \"open"), ParseError);
}
