#pragma once

// Hand-written methods with their def-use facts enumerated by hand.
// Lines count from the signature line (0). Facts are (def_line, var, uses).

#include <string>
#include <vector>

#include "jdbench/code_facts.hpp"

namespace fixtures {

struct DefUseCase {
  std::string name;
  std::string source;  // one method, wrapped in a class by the caller
  std::vector<jdbench::DefUseFact> expected;
};

inline std::vector<DefUseCase> def_use_cases() {
  using F = jdbench::DefUseFact;
  return {
      {"straight_line",
       "int sum(int a, int b) {\n"
       "  int c = a + b;\n"
       "  return c;\n"
       "}\n",
       {F{"a", 0, {1}}, F{"b", 0, {1}}, F{"c", 1, {2}}}},
      {"redefinition_reads_previous",
       "int f(int x) {\n"
       "  int y = x * 2;\n"
       "  y = y + x;\n"
       "  x = 0;\n"
       "  return x + y;\n"
       "}\n",
       {F{"x", 0, {1, 2}}, F{"y", 1, {2}}, F{"y", 2, {4}}, F{"x", 3, {4}}}},
      {"for_loop_and_postfix",
       "int count(int[] arr) {\n"
       "  int n = 0;\n"
       "  for (int i = 0; i < arr.length; i++) {\n"
       "    if (arr[i] > 0) {\n"
       "      n++;\n"
       "    }\n"
       "  }\n"
       "  return n;\n"
       "}\n",
       {F{"arr", 0, {2, 3}}, F{"n", 1, {4}}, F{"i", 2, {2}}, F{"i", 2, {3}}, F{"n", 4, {7}}}},
      {"for_each_compound",
       "int total(int[] xs) {\n"
       "  int t = 0;\n"
       "  for (int x : xs) {\n"
       "    t += x;\n"
       "  }\n"
       "  return t;\n"
       "}\n",
       {F{"xs", 0, {2}}, F{"t", 1, {3}}, F{"x", 2, {3}}, F{"t", 3, {5}}}},
      {"catch_parameter",
       "String read(Path p) {\n"
       "  String s = null;\n"
       "  try {\n"
       "    s = Files.readString(p);\n"
       "  } catch (IOException e) {\n"
       "    LOG.warn(\"failed\", e);\n"
       "    s = \"\";\n"
       "  }\n"
       "  return s;\n"
       "}\n",
       {F{"p", 0, {3}}, F{"s", 1, {}}, F{"s", 3, {}}, F{"e", 4, {5}}, F{"s", 6, {8}}}},
      {"multi_declarator",
       "int g(int a) {\n"
       "  int b = a, c = b + 1, d;\n"
       "  d = c * 2;\n"
       "  a -= d;\n"
       "  return a + b;\n"
       "}\n",
       {F{"a", 0, {1, 3}}, F{"b", 1, {1, 4}}, F{"c", 1, {2}}, F{"d", 2, {3}}, F{"a", 3, {4}}}},
      {"while_loop_swaps",
       "int gcd(int a, int b) {\n"
       "  while (b != 0) {\n"
       "    int t = b;\n"
       "    b = a % b;\n"
       "    a = t;\n"
       "  }\n"
       "  return a;\n"
       "}\n",
       {F{"a", 0, {3}}, F{"b", 0, {1, 2, 3}}, F{"t", 2, {4}}, F{"b", 3, {}}, F{"a", 4, {6}}}},
      {"array_element_store",
       "int[] fill(int n) {\n"
       "  int[] out = new int[n];\n"
       "  for (int i = 0; i < n; i++) {\n"
       "    out[i] = i * i;\n"
       "  }\n"
       "  return out;\n"
       "}\n",
       {F{"n", 0, {1, 2}}, F{"out", 1, {3, 5}}, F{"i", 2, {2}}, F{"i", 2, {3}}}},
      {"prefix_increment_nested_block",
       "int bump(int m) {\n"
       "  int c = 0;\n"
       "  if (m > 0) {\n"
       "    ++c;\n"
       "  }\n"
       "  { int m2 = m + c;\n"
       "    c = m2 * 2;\n"
       "  }\n"
       "  // done\n"
       "  return c;\n"
       "}\n",
       {F{"m", 0, {2, 5}}, F{"c", 1, {3}}, F{"c", 3, {5}}, F{"m2", 5, {6}}, F{"c", 6, {9}}}},
      {"instanceof_pattern",
       "int len(Object o) {\n"
       "  int r = 0;\n"
       "  if (o instanceof String s) {\n"
       "    r = s.length();\n"
       "  }\n"
       "  return r;\n"
       "}\n",
       {F{"o", 0, {2}}, F{"r", 1, {}}, F{"s", 2, {3}}, F{"r", 3, {5}}}},
      {"try_with_resources_and_assignment_in_condition",
       "long size(Path p) throws IOException {\n"
       "  long total = 0;\n"
       "  try (InputStream in = Files.newInputStream(p)) {\n"
       "    int b;\n"
       "    while ((b = in.read()) != -1) {\n"
       "      total += 1;\n"
       "    }\n"
       "  }\n"
       "  return total;\n"
       "}\n",
       {F{"p", 0, {2}}, F{"total", 1, {5}}, F{"in", 2, {4}}, F{"b", 4, {}}, F{"total", 5, {8}}}},
      {"labeled_loop_with_switch",
       "String classify(String code) {\n"
       "  String kind;\n"
       "  outer:\n"
       "  for (int i = 0; i < code.length(); i++) {\n"
       "    switch (i % 3) {\n"
       "      case 0: kind = \"zero\"; break outer;\n"
       "      default: kind = \"other\"; continue outer;\n"
       "    }\n"
       "  }\n"
       "  kind = code.isEmpty() ? \"empty\" : \"text\";\n"
       "  return kind;\n"
       "}\n",
       {F{"code", 0, {3, 9}}, F{"i", 3, {3}}, F{"i", 3, {4}}, F{"kind", 5, {}}, F{"kind", 6, {}},
        F{"kind", 9, {10}}}},
      {"field_access_is_not_a_local",
       "void setName(String name) {\n"
       "  String trimmed = name.trim();\n"
       "  this.name = trimmed;\n"
       "  count++;\n"
       "}\n",
       {F{"name", 0, {1}}, F{"trimmed", 1, {2}}}},
      {"multiline_declaration",
       "Map<String, Integer> index(List<String> words) {\n"
       "  Map<String, Integer> result =\n"
       "      new HashMap<>();\n"
       "  int pos = 0;\n"
       "  for (String w : words) {\n"
       "    result.putIfAbsent(w, pos);\n"
       "    if (pos < 1000)\n"
       "      pos += w.length();\n"
       "  }\n"
       "  return result;\n"
       "}\n",
       {F{"words", 0, {4}}, F{"result", 1, {5, 9}}, F{"pos", 3, {5, 6, 7}}, F{"w", 4, {5, 7}},
        F{"pos", 7, {}}}},
      {"multi_catch_and_finally",
       "int parse(String s) {\n"
       "  int v = -1;\n"
       "  try {\n"
       "    v = Integer.parseInt(s.trim());\n"
       "  } catch (NumberFormatException | NullPointerException ex) {\n"
       "    v = fallback(ex);\n"
       "  } finally {\n"
       "    LOG.fine(\"parsed \" + v);\n"
       "  }\n"
       "  return v;\n"
       "}\n",
       {F{"s", 0, {3}}, F{"v", 1, {}}, F{"v", 3, {}}, F{"ex", 4, {5}}, F{"v", 5, {7, 9}}}},
      {"annotated_multiline_signature",
       "@Override\n"
       "public List<Integer> merge(List<Integer> left,\n"
       "    List<Integer> right)\n"
       "{\n"
       "  List<Integer> out = new ArrayList<>(left);\n"
       "  out = concat(out, right);\n"
       "  return out;\n"
       "}\n",
       {F{"left", 0, {3}}, F{"right", 0, {4}}, F{"out", 3, {4}}, F{"out", 4, {5}}}},
      {"sibling_loops_reuse_name",
       "int sumTwice(int[] a) {\n"
       "  int s = 0;\n"
       "  for (int i = 0; i < a.length; i++) s += a[i];\n"
       "  for (int i = 0; i < a.length; i++) {\n"
       "    s += a[i] * i;\n"
       "  }\n"
       "  return s;\n"
       "}\n",
       {F{"a", 0, {2, 3, 4}}, F{"s", 1, {2}}, F{"i", 2, {2}}, F{"i", 2, {2}}, F{"s", 2, {4}},
        F{"i", 3, {3}}, F{"i", 3, {4}}, F{"s", 4, {6}}}},
  };
}

}  // namespace fixtures
