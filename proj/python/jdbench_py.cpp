#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jdbench/code_facts.hpp"
#include "jdbench/pipeline.hpp"
#include "jdbench/prompts.hpp"

namespace py = pybind11;
using namespace jdbench;

namespace {

Strategy strategy_arg(const std::string& name) {
  auto s = parse_strategy(name);
  if (!s) throw ConfigError("unknown strategy: " + name);
  return *s;
}

MethodRecord method_arg(const std::string& record_json) {
  return method_from_json(nlohmann::json::parse(record_json));
}

}  // namespace

PYBIND11_MODULE(_jdbench, m) {
  m.doc() = "Native core of the jdbench summarization benchmark";
  m.attr("__version__") = std::string(kToolVersion);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");
  py::register_exception<ParseError>(m, "ParseError");

  m.def("tokenize_summary", [](const std::string& t) { return tokenize_summary(t).tokens; });
  m.def("tokenize_code", [](const std::string& t) { return tokenize_code(t).tokens; });
  m.def("bleu_cn", [](const std::string& c, const std::string& r) {
    return bleu_cn(tokenize_summary(c), tokenize_summary(r));
  });
  m.def("bleu_dc", [](const std::string& c, const std::string& r) {
    return bleu_dc(tokenize_summary(c), tokenize_summary(r));
  });
  m.def("meteor", [](const std::string& c, const std::string& r) {
    return meteor(tokenize_summary(c), tokenize_summary(r));
  });
  m.def("rouge_l", [](const std::string& c, const std::string& r) {
    auto v = rouge_l(tokenize_summary(c), tokenize_summary(r));
    return std::make_pair(v.precision, v.recall);
  });
  m.def("score_pair_json", [](const std::string& c, const std::string& r) {
    HashingEmbedder embedder;
    return to_json(score_pair(c, r, ScoringProviders{&embedder, nullptr, nullptr})).dump();
  });

  m.def("extract_methods_json",
        [](const std::string& source, const std::string& path, bool require_javadoc) {
          SourceFile f{path, source, true};
          return write_corpus_jsonl(extract_methods(f, require_javadoc));
        },
        py::arg("source"), py::arg("path") = "Snippet.java", py::arg("require_javadoc") = false);
  m.def("extract_ground_truth", [](const std::string& javadoc) { return extract_ground_truth(javadoc); });
  m.def("semantic_facts", [](const std::string& record_json) {
    return render_semantic_facts(analyze_method(method_arg(record_json)));
  });
  m.def("render_prompt",
        [](const std::string& record_json, const std::string& strategy, bool masked) {
          return render_stage1(method_arg(record_json), strategy_arg(strategy), masked).text;
        },
        py::arg("record_json"), py::arg("strategy"), py::arg("masked") = false);

  m.def("bm25_top_k",
        [](const std::vector<std::pair<std::string, std::string>>& docs, const std::string& query,
           std::size_t k) {
          std::vector<std::pair<std::string, TokenStream>> d;
          for (const auto& [id, text] : docs) d.emplace_back(id, tokenize_code(text));
          Bm25Index index(std::move(d));
          std::vector<std::pair<std::string, double>> out;
          for (const auto& hit : index.top_k(tokenize_code(query), k)) out.emplace_back(hit.method_id, hit.score);
          return out;
        });

  m.def("t_test_one_sided", [](const std::vector<double>& a, const std::vector<double>& b) {
    auto r = t_test_one_sided(a, b);
    return std::make_pair(r.statistic, r.p_value);
  });
  m.def("ks_test_one_sided", [](const std::vector<double>& a, const std::vector<double>& b) {
    auto r = ks_test_one_sided(a, b);
    return std::make_pair(r.statistic, r.p_value);
  });
  m.def("format_mean_std", &format_mean_std);
  m.def("postprocess_summary", [](const std::string& raw) { return postprocess_summary(raw); });
  m.def("mock_complete", [](const std::string& prompt) {
    MockProvider p;
    GenerationRequest r;
    r.prompt_text = prompt;
    return p.complete(r).text;
  });

  m.def("run_pipeline",
        [](const std::string& config_path, const std::string& out_dir) {
          auto config = load_run_config(config_path);
          if (!out_dir.empty()) config.output_dir = out_dir;
          PipelineSummary s;
          {
            py::gil_scoped_release release;
            s = run_pipeline(config);
          }
          py::dict d;
          d["methods_extracted"] = s.methods_extracted;
          d["train_size"] = s.train_size;
          d["eval_size"] = s.eval_size;
          d["selected"] = s.selected;
          d["generations_ok"] = s.generations_ok;
          d["generations_failed"] = s.generations_failed;
          d["scored"] = s.scored;
          return d;
        },
        py::arg("config_path"), py::arg("out_dir") = "");
}
