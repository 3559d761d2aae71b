"""Class-tree multi-document summarization (C++ core)."""

from ._core import (
    InputError,
    ProviderError,
    cosine_similarity,
    count_words,
    kmeans,
    porter_stem,
    rouge,
    rouge_l,
    rouge_n,
    rouge_su4,
    score_cs,
    score_final,
    score_nr,
    score_position,
    segment_sentences,
    summarize,
    truncate,
)

__all__ = [
    "InputError",
    "ProviderError",
    "cosine_similarity",
    "count_words",
    "kmeans",
    "porter_stem",
    "rouge",
    "rouge_l",
    "rouge_n",
    "rouge_su4",
    "score_cs",
    "score_final",
    "score_nr",
    "score_position",
    "segment_sentences",
    "summarize",
    "truncate",
]
