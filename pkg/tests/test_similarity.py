from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoscaffold.errors import (
    CassetteMissError,
    ConfigError,
    SimilarityUnavailableError,
)
from ontoscaffold.similarity import (
    EmbeddingSimilarity,
    ExactSimilarity,
    TrigramSimilarity,
    make_provider,
)

from stubserver import StubServer


def oracle_trigram_cosine(a: str, b: str) -> float:
    """Independent brute-force implementation kept separate on purpose."""

    def grams(s):
        padded = "##" + s.casefold() + "##"
        counts = {}
        for i in range(len(padded) - 2):
            g = padded[i : i + 3]
            counts[g] = counts.get(g, 0) + 1
        return counts

    ga, gb = grams(a), grams(b)
    dot = sum(ga[g] * gb.get(g, 0) for g in ga)
    if dot == 0:
        return 0.0
    na = math.sqrt(sum(v * v for v in ga.values()))
    nb = math.sqrt(sum(v * v for v in gb.values()))
    return dot / (na * nb)


def test_identity_is_exactly_one():
    provider = TrigramSimilarity()
    assert provider.similarity("x", "x") == 1.0
    assert provider.similarity("public interest", "public interest") == 1.0


def test_disjoint_trigrams_zero():
    assert TrigramSimilarity().similarity("abc", "xyz") == 0.0


def test_trigram_regression_constant():
    # value computed by the independent oracle: 15 / sqrt(17 * 21)
    got = TrigramSimilarity().similarity("public interest", "the public interest")
    assert got == pytest.approx(0.7938841860374447, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.text(min_size=1, max_size=25), st.text(min_size=1, max_size=25))
def test_trigram_matches_oracle_and_contract(a, b):
    provider = TrigramSimilarity()
    got = provider.similarity(a, b)
    assert got == pytest.approx(min(1.0, oracle_trigram_cosine(a, b)), abs=1e-12)
    assert 0.0 <= got <= 1.0
    assert got == provider.similarity(b, a)


def test_similarity_matrix_agrees_with_scalar():
    provider = TrigramSimilarity()
    rows, cols = ["alpha", "beta"], ["beta", "gamma", "alpha"]
    matrix = provider.similarity_matrix(rows, cols)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            assert matrix[i][j] == provider.similarity(r, c)


def test_empty_string_rejected():
    with pytest.raises(ValueError):
        TrigramSimilarity().similarity("", "x")


def test_exact_backend():
    provider = ExactSimilarity()
    assert provider.similarity("a", "a") == 1.0
    assert provider.similarity("a", "b") == 0.0


def test_make_provider():
    assert make_provider("char_trigram").backend == "char_trigram"
    assert make_provider("exact").backend == "exact"
    with pytest.raises(ConfigError):
        make_provider("bm25")


# -- embedding backend -------------------------------------------------------

def test_embedding_live_and_clamping():
    vectors = {"a": [1.0, 0.0], "b": [-1.0, 0.0], "c": [1.0, 0.0]}

    def handler(path, payload):
        return 200, [vectors[t] for t in payload["input"]]

    with StubServer(handler) as server:
        provider = EmbeddingSimilarity(endpoint=server.url, mode="live")
        assert provider.similarity("a", "b") == 0.0  # cosine -1 clamps to 0
        assert provider.similarity("a", "c") == 1.0
        assert provider.similarity("a", "a") == 1.0


def test_embedding_record_then_replay(tmp_path):
    cache = tmp_path / "emb.jsonl"

    def handler(path, payload):
        return 200, [[1.0, 2.0, 3.0] for _ in payload["input"]]

    with StubServer(handler) as server:
        recorder = EmbeddingSimilarity(
            endpoint=server.url, mode="record", cache_path=cache
        )
        first = recorder.similarity("alpha", "beta")
    lines = [json.loads(l) for l in cache.read_text().splitlines()]
    assert {l["text"] for l in lines} == {"alpha", "beta"}

    replayer = EmbeddingSimilarity(mode="replay", cache_path=cache)
    assert replayer.similarity("alpha", "beta") == first
    with pytest.raises(CassetteMissError):
        replayer.similarity("alpha", "unseen text")


def test_embedding_replay_requires_cache():
    with pytest.raises(ConfigError):
        EmbeddingSimilarity(mode="replay")


def test_embedding_unreachable(tmp_path):
    provider = EmbeddingSimilarity(
        endpoint="http://127.0.0.1:9", mode="live", timeout=0.2
    )
    with pytest.raises(SimilarityUnavailableError):
        provider.similarity("a", "b")


def test_fixture_embedding_cache_identity(embeddings_path):
    provider = EmbeddingSimilarity(
        mode="replay", cache_path=embeddings_path, model="fixture-embedding"
    )
    assert provider.similarity("software engineer", "software engineer") == 1.0
    other = provider.similarity("software engineer", "public interest")
    assert 0.0 <= other < 1.0
