import math
import os
from pathlib import Path

import pytest

import patentsum

DATA = Path(os.environ.get("PATENTSUM_SYNTHETIC_DIR", Path(__file__).resolve().parents[2] / "data" / "synthetic"))


def test_text_helpers():
    assert patentsum.word_count("a  b\tc") == 3
    assert patentsum.cap_tokens("a b c d", 2) == "a b"
    assert patentsum.split_sentences("FIG. 1 shows it. Next one.") == ["FIG. 1 shows it.", "Next one."]


def test_hashed_embed_is_unit_norm_and_deterministic():
    v = patentsum.hashed_embed("rotor blade pitch", dim=64)
    assert len(v) == 64
    assert math.isclose(math.sqrt(sum(x * x for x in v)), 1.0, rel_tol=1e-6)
    assert v == patentsum.hashed_embed("rotor blade pitch", dim=64)


def test_segment_and_first_claim():
    seg = patentsum.segment("BACKGROUND\nOld.\nSUMMARY\nNew and fast.\nDETAILED DESCRIPTION\nMore.")
    assert seg["summary_segment"] == "New and fast."
    assert seg["brief_description"].startswith("BACKGROUND")
    assert seg["brief_description"].endswith("New and fast.")
    assert patentsum.first_independent_claim(["The device of claim 2.", "A device."]) == (2, "A device.")
    assert patentsum.first_independent_claim([]) is None


def test_extractive_summary():
    text = "One gear turns. Two shafts spin. Three pumps push water. Four valves close."
    r = patentsum.extractive_summary(text, k=2)
    assert r["k"] == 2
    assert r["selected"] == sorted(r["selected"])
    assert all(s in text for s in r["sentences"])
    assert r == patentsum.extractive_summary(text, k=2)


def test_rouge():
    r = patentsum.rouge("the cat sat", "the cat sat on the mat")
    assert r["rouge1"]["precision"] == 1.0
    assert r["rougeL"]["recall"] == 0.5


def test_pipeline_on_synthetic(tmp_path):
    settings = {
        "corpus.path": str(DATA / "corpus.jsonl"),
        "topics.path": str(DATA / "topics.txt"),
        "qrels.path": str(DATA / "qrels.txt"),
        "run.strategies": "summary_segment",
        "output.dir": str(tmp_path),
    }
    runs, _ = patentsum.run(settings)
    metrics = patentsum.evaluate(runs[0], DATA / "qrels.txt")
    assert metrics["evaluated"] == 20
    assert metrics["mean"]["R@30"] == 1.0
    hits = patentsum.search(dict(settings, **{"run.k": "3"}), "gear shaft")
    assert len(hits) == 3


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(patentsum.InputError):
        patentsum.segment_corpus({"corpus.path": str(tmp_path / "absent.jsonl")})
    with pytest.raises(ValueError):
        patentsum.run({"no.such.key": "1"})
