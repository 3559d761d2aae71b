import math

import pytest

import ctsum

DOCS = [
    ("a", "The river flooded the valley town on Monday. Rescue teams moved families to the school."),
    ("b", "Heavy rain caused the river to flood the town. The mayor asked for federal aid."),
    ("c", "Farmers lost crops when the valley flooded. The river peaked on Tuesday night."),
]


def test_text_helpers():
    assert ctsum.segment_sentences("Dr. Smith left. He came back!") == ["Dr. Smith left.", "He came back!"]
    assert ctsum.count_words("one two  three") == 3
    assert ctsum.porter_stem("running") == "run"
    assert ctsum.truncate("one two three", budget_words=2) == "one two"


def test_scores():
    assert ctsum.cosine_similarity([1, 2, 3], [4, 5, 6]) == pytest.approx(32 / math.sqrt(14 * 77))
    s = [1.0, 0.0]
    inside = [0.8, 0.6]
    outside = [0.3, math.sqrt(0.91)]
    assert ctsum.score_cs(s, inside, outside, 0.9) == pytest.approx(0.79)
    assert ctsum.score_cs(s, [0.5, math.sqrt(0.75)], None, 0.9) == pytest.approx(0.55)
    assert ctsum.score_nr(s, []) == 1.0
    assert ctsum.score_position(1, 8) == pytest.approx(math.exp(-0.5))
    assert ctsum.score_final(1, 1, 1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ctsum.score_final(1, 1, 1, alpha=0.5)


def test_kmeans():
    r = ctsum.kmeans([[0, 0], [0, 1], [10, 0], [10, 1]], k=2, seed=1)
    assert r["divisible"]
    assert r["assignments"] == [0, 0, 1, 1]
    assert r["inertia"] == pytest.approx(1.0)


def test_rouge():
    r = ctsum.rouge_n("the cat sat", ["the cat slept"], n=1, stem=False)
    assert r["recall"] == pytest.approx(2 / 3)
    assert ctsum.rouge_l("a b c d", ["a c b d"], stem=False)["recall"] == pytest.approx(0.75)
    su4 = ctsum.rouge_su4("a b c", ["a c"], stem=False)
    assert (su4["recall"], su4["precision"]) == (pytest.approx(1.0), pytest.approx(0.5))
    assert ctsum.rouge("r2", "the cat sat", ["the cat slept"], stem=False)["f1"] == pytest.approx(0.5)


def test_summarize():
    out = ctsum.summarize("flood", DOCS, budget_words=15)
    again = ctsum.summarize("flood", DOCS, budget_words=15)
    assert out == again
    assert out["topic_id"] == "flood"
    assert out["sentences"]
    assert sum(ctsum.count_words(s["text"]) for s in out["sentences"]) >= 15
    comp1 = ctsum.summarize("flood", DOCS, method="comp1", budget_bytes=60)
    assert comp1["summary"]


def test_errors():
    with pytest.raises(ctsum.InputError):
        ctsum.summarize("t", DOCS, method="nope")
    with pytest.raises(ctsum.InputError):
        ctsum.summarize("", DOCS)
    with pytest.raises(ctsum.ProviderError):
        ctsum.summarize("t", DOCS, embedder="file:/nonexistent.jsonl")
