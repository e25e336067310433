"""Python bindings for the jdbench summarization benchmark."""

import json

from . import _jdbench
from ._jdbench import (
    ConfigError,
    DataError,
    ParseError,
    bleu_cn,
    bleu_dc,
    bm25_top_k,
    extract_ground_truth,
    format_mean_std,
    ks_test_one_sided,
    meteor,
    mock_complete,
    postprocess_summary,
    rouge_l,
    run_pipeline,
    t_test_one_sided,
    tokenize_code,
    tokenize_summary,
)

__version__ = _jdbench.__version__


def extract_methods(source, path="Snippet.java", require_javadoc=False):
    """Method records (as dicts) for one Java source string."""
    text = _jdbench.extract_methods_json(source, path, require_javadoc)
    return [json.loads(line) for line in text.splitlines() if line]


def score_pair(candidate, reference):
    """All offline metrics for one pair; neural metrics come back as None."""
    return json.loads(_jdbench.score_pair_json(candidate, reference))


def semantic_facts(record):
    return _jdbench.semantic_facts(json.dumps(record))


def render_prompt(record, strategy, masked=False):
    return _jdbench.render_prompt(json.dumps(record), strategy, masked)
