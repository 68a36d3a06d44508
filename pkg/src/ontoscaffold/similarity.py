"""String similarity providers behind one contract.

All providers return values in [0, 1], are symmetric, and give exactly
1.0 for identical non-empty strings. The character-trigram backend keeps
the whole evaluation suite runnable offline; the embedding backend talks
to an HTTP service and supports the same record/replay discipline as the
LLM client, keyed by (model, text).
"""

from __future__ import annotations

import json
import math
import threading
from collections import Counter
from pathlib import Path

import requests

from .errors import CassetteMissError, ConfigError, SimilarityUnavailableError


def char_trigrams(s: str) -> Counter:
    """Trigram counts of the padded, case-folded string."""
    padded = "##" + s.casefold() + "##"
    return Counter(padded[i : i + 3] for i in range(len(padded) - 2))


def _cosine(a: Counter, b: Counter) -> float:
    if a == b:
        return 1.0
    dot = sum(count * b[gram] for gram, count in a.items())
    if dot == 0:
        return 0.0
    norm_a = math.sqrt(sum(c * c for c in a.values()))
    norm_b = math.sqrt(sum(c * c for c in b.values()))
    return min(1.0, dot / (norm_a * norm_b))


class TrigramSimilarity:
    """Cosine over character-trigram count vectors; deterministic, offline."""

    backend = "char_trigram"

    def similarity(self, a: str, b: str) -> float:
        if not a or not b:
            raise ValueError("similarity requires non-empty strings")
        return _cosine(char_trigrams(a), char_trigrams(b))

    def similarity_matrix(self, rows: list[str], cols: list[str]) -> list[list[float]]:
        row_grams = [char_trigrams(r) for r in rows]
        col_grams = [char_trigrams(c) for c in cols]
        return [[_cosine(rg, cg) for cg in col_grams] for rg in row_grams]


class ExactSimilarity:
    """1.0 on string equality, else 0.0; for tests and destructive merges."""

    backend = "exact"

    def similarity(self, a: str, b: str) -> float:
        if not a or not b:
            raise ValueError("similarity requires non-empty strings")
        return 1.0 if a == b else 0.0

    def similarity_matrix(self, rows: list[str], cols: list[str]) -> list[list[float]]:
        return [[self.similarity(r, c) for c in cols] for r in rows]


def _vector_cosine_clamped(u: list[float], v: list[float]) -> float:
    dot = sum(x * y for x, y in zip(u, v))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(y * y for y in v))
    if nu == 0 or nv == 0:
        return 0.0
    # real embedding cosines can be negative; thresholds are positive
    return max(0.0, min(1.0, dot / (nu * nv)))


class EmbeddingSimilarity:
    """Remote embedding backend with live/replay/record modes.

    The cache file is JSON Lines of {"model", "text", "vector"}; replay
    mode answers only from it and raises CassetteMissError on unknown
    text, so recorded evaluations stay byte-reproducible.
    """

    backend = "remote_embedding"

    def __init__(
        self,
        endpoint: str | None = None,
        model: str = "default-embedding",
        mode: str = "live",
        cache_path: str | Path | None = None,
        timeout: float = 60.0,
        session=None,
    ):
        if mode not in ("live", "replay", "record"):
            raise ConfigError(f"unknown embedding mode {mode!r}")
        if mode in ("replay", "record") and cache_path is None:
            raise ConfigError(f"embedding mode {mode!r} requires a cache path")
        if mode in ("live", "record") and not endpoint:
            raise ConfigError(f"embedding mode {mode!r} requires an endpoint")
        self.endpoint = endpoint
        self.model = model
        self.mode = mode
        self.cache_path = Path(cache_path) if cache_path else None
        self.timeout = timeout
        self._session = session or requests.Session()
        self._lock = threading.Lock()
        self._cache: dict[str, list[float]] = {}
        if self.cache_path is not None and self.cache_path.exists():
            with open(self.cache_path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = json.loads(line)
                    if record.get("model", self.model) == self.model:
                        self._cache[record["text"]] = record["vector"]

    def _fetch(self, texts: list[str]) -> list[list[float]]:
        try:
            resp = self._session.post(
                self.endpoint,
                json={"input": texts, "model": self.model},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            vectors = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise SimilarityUnavailableError(
                f"embedding request failed: {exc}"
            ) from exc
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise SimilarityUnavailableError(
                "embedding response is not one vector per input"
            )
        return vectors

    def embed(self, texts: list[str]) -> list[list[float]]:
        missing = [t for t in texts if t not in self._cache]
        if missing:
            if self.mode == "replay":
                raise CassetteMissError(f"embedding:{missing[0]!r}")
            fetched = self._fetch(missing)
            with self._lock:
                for text, vector in zip(missing, fetched):
                    self._cache[text] = vector
                if self.mode == "record":
                    with open(self.cache_path, "a", encoding="utf-8") as fh:
                        for text, vector in zip(missing, fetched):
                            fh.write(
                                json.dumps(
                                    {"model": self.model, "text": text, "vector": vector},
                                    ensure_ascii=False,
                                )
                                + "\n"
                            )
        return [self._cache[t] for t in texts]

    def similarity(self, a: str, b: str) -> float:
        if not a or not b:
            raise ValueError("similarity requires non-empty strings")
        if a == b:
            return 1.0
        u, v = self.embed([a, b])
        return _vector_cosine_clamped(u, v)

    def similarity_matrix(self, rows: list[str], cols: list[str]) -> list[list[float]]:
        row_vecs = self.embed(rows)
        col_vecs = self.embed(cols)
        out = []
        for r_text, u in zip(rows, row_vecs):
            out.append(
                [
                    1.0 if r_text == c_text else _vector_cosine_clamped(u, v)
                    for c_text, v in zip(cols, col_vecs)
                ]
            )
        return out


def make_provider(
    backend: str,
    endpoint: str | None = None,
    model: str = "default-embedding",
    mode: str = "live",
    cache_path: str | Path | None = None,
):
    """Build a similarity provider from config strings."""
    if backend == "char_trigram":
        return TrigramSimilarity()
    if backend == "exact":
        return ExactSimilarity()
    if backend == "remote_embedding":
        return EmbeddingSimilarity(
            endpoint=endpoint, model=model, mode=mode, cache_path=cache_path
        )
    raise ConfigError(f"unknown similarity backend {backend!r}")
