"""Patent prior-art retrieval: segmentation, summarization, dense retrieval and evaluation."""

from ._core import (
    BackendError,
    BackendUnavailable,
    InputError,
    cap_tokens,
    config_keys,
    eval_runs,
    evaluate,
    extractive_summary,
    first_independent_claim,
    hashed_embed,
    index,
    report,
    rouge,
    run,
    search,
    segment,
    segment_corpus,
    split_sentences,
    summarize,
    word_count,
)

__all__ = [
    "BackendError",
    "BackendUnavailable",
    "InputError",
    "cap_tokens",
    "config_keys",
    "eval_runs",
    "evaluate",
    "extractive_summary",
    "first_independent_claim",
    "hashed_embed",
    "index",
    "report",
    "rouge",
    "run",
    "search",
    "segment",
    "segment_corpus",
    "split_sentences",
    "summarize",
    "word_count",
]
