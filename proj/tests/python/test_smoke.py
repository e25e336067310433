import math
import os
import pathlib

import pytest

import jdbench

FIXTURES = pathlib.Path(os.environ.get("JDBENCH_FIXTURES_DIR", pathlib.Path(__file__).parents[1] / "fixtures"))

SOURCE = """
class Calc {
    /**
     * Adds two numbers together.
     * @param a first
     */
    int add(int a, int b) {
        int c = a + b;
        return c;
    }
}
"""


def test_version():
    assert jdbench.__version__ == "0.3.0"


def test_extract_and_facts():
    [rec] = jdbench.extract_methods(SOURCE, "Calc.java", require_javadoc=True)
    assert rec["simple_name"] == "add"
    assert rec["ground_truth_summary"] == "Adds two numbers together."
    facts = jdbench.semantic_facts(rec)
    assert "DataFlow: c defined@1 used@2" in facts


def test_prompts_and_masking():
    [rec] = jdbench.extract_methods(SOURCE, "Calc.java")
    text = jdbench.render_prompt(rec, "wordrestrict", masked=True)
    assert "Please do not use more than 20 words." in text
    assert "MASKED(" in text and " add(" not in text
    with pytest.raises(jdbench.ConfigError):
        jdbench.render_prompt(rec, "nope")


def test_metrics():
    assert jdbench.bleu_cn("the cat sat", "the cat sat down") == pytest.approx(math.exp(-1 / 3), abs=1e-12)
    assert jdbench.rouge_l("a b c d", "a c d e") == pytest.approx((0.75, 0.75))
    scores = jdbench.score_pair("Adds numbers.", "Adds two numbers.")
    assert scores["bert_score"] is None and 0 < scores["bleu"] <= 1
    assert jdbench.tokenize_summary("Hi, There") == ["hi", ",", "there"]


def test_stats_and_format():
    d, p = jdbench.ks_test_one_sided([10, 11, 12], [1, 2, 3])
    assert d == 1.0 and p == pytest.approx(0.0498, abs=1e-4)
    _, p = jdbench.t_test_one_sided([0.3, 0.5, 0.7], [0.3, 0.5, 0.7])
    assert p == pytest.approx(0.5)
    assert jdbench.format_mean_std(0.611, 0.084) == "0.61(0.08)"


def test_bm25_and_mock():
    hits = jdbench.bm25_top_k([("a", "parseInt value"), ("b", "list add item")], "parse", 1)
    assert hits[0][0] == "a"
    out = jdbench.mock_complete("Generate.\n\nint add(int a, int b) { return a + b; }")
    assert out == jdbench.mock_complete("Generate.\n\nint add(int a, int b) { return a + b; }")
    assert jdbench.postprocess_summary(out)


def test_pipeline(tmp_path):
    summary = jdbench.run_pipeline(str(FIXTURES / "offline.yaml"), str(tmp_path))
    assert summary["generations_ok"] == 200
    assert (tmp_path / "report.md").read_text().startswith("# Summary evaluation report")


def test_errors_map_to_exceptions(tmp_path):
    with pytest.raises(jdbench.ConfigError):
        jdbench.run_pipeline(str(tmp_path / "missing.yaml"), "")
    with pytest.raises(jdbench.DataError):
        jdbench.t_test_one_sided([1.0], [1.0, 2.0])
