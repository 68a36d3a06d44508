"""Constrained relation inference for one sentence at a time.

The prompt pins the model down three ways: output shape (JSON array of
subject/predicate/object objects), endpoint choice (subjects/objects
from the mined candidate terms), and predicate vocabulary (prefer the
mined verbs). Responses are parsed strictly with a bounded retry; a
sentence that never yields a valid non-empty array becomes an orphan
instead of polluting the graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    ConfigError,
    LLMUnavailableError,
    MalformedJsonError,
    NoJsonArrayError,
    ParseError,
    TripleShapeError,
)
from .ingest import Sentence
from .llm import PromptRequest, infer
from .mining import CandidateSet
from .normalize import RawTriple


@dataclass
class InferenceSettings:
    model_name: str = "mistral-7b-instruct"
    temperature: float = 0.2
    retries: int = 3
    token_floor: int = 256
    token_ceiling: int = 1024
    triples_per_term: int = 2
    tokens_per_triple: int = 24


@dataclass
class RawTripleBatch:
    sentence_id: str
    triples: list[RawTriple]
    raw_response: str
    attempts_used: int


@dataclass
class OrphanMark:
    sentence_id: str
    text: str
    reason: str  # no_verbs | empty_result | parse_failure
    attempts_used: int = 0

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "text": self.text,
            "reason": self.reason,
            "attempts_used": self.attempts_used,
        }


def dynamic_max_tokens(
    n_terms: int, k: int, lo: int, hi: int, tokens_per_triple: int = 24
) -> int:
    """Token budget that grows with the candidate count, clamped to [lo, hi].

    Budget = n_terms * k * tokens_per_triple, where k is the assumed
    triples-per-term factor and tokens_per_triple the per-triple output
    estimate.
    """
    if lo > hi:
        raise ConfigError(f"token clamp floor {lo} exceeds ceiling {hi}")
    return min(hi, max(lo, n_terms * k * tokens_per_triple))


def compose_constrained_prompt(
    sentence: Sentence, terms: list[str], verbs: list[str]
) -> str:
    """Build the extraction prompt for one sentence.

    Block order is part of the replay contract: instruction, sentence,
    candidate terms, verb vocabulary (omitted when empty), empty-result
    rule. Reordering or rewording invalidates recorded cassettes.
    """
    if not terms:
        raise ValueError("candidate terms must be non-empty at prompt time")
    lines = [
        "Extract relation triples from the sentence below.",
        'Respond with ONLY a JSON array of objects, each having exactly the string fields "subject", "predicate", and "object".',
        "",
        f"Sentence: {sentence.text}",
        "",
        "Candidate terms. Every subject and every object MUST be one of these terms:",
    ]
    lines += [f"{i}. {term}" for i, term in enumerate(terms, start=1)]
    if verbs:
        lines += [
            "",
            "Verbs found in the sentence. Prefer predicates based on these verbs:",
        ]
        lines += [f"{i}. {verb}" for i, verb in enumerate(verbs, start=1)]
    else:
        lines += ["", "Phrase each predicate as a short verb phrase of your choice."]
    lines += [
        "",
        "If the sentence expresses no relation between the candidate terms, output [].",
    ]
    return "\n".join(lines)


def _balanced_array_candidates(raw: str):
    """Yield (start, end) spans of bracket-balanced arrays, string-aware."""
    i = 0
    n = len(raw)
    while i < n:
        if raw[i] != "[":
            i += 1
            continue
        depth = 0
        in_string = False
        escaped = False
        for j in range(i, n):
            ch = raw[j]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth == 0:
                    yield i, j + 1
                    break
        i += 1


def parse_valid_json(raw: str) -> list[RawTriple]:
    """Parse the first valid JSON array in raw text into triples.

    Tolerates prose before/after the array (and code fences), but is
    strict about content: every element must be an object with non-empty
    string subject/predicate/object. Raises NoJsonArrayError,
    MalformedJsonError, or TripleShapeError.
    """
    parsed = None
    saw_malformed = False
    for start, end in _balanced_array_candidates(raw):
        try:
            parsed = json.loads(raw[start:end])
            break
        except json.JSONDecodeError:
            saw_malformed = True
            continue
    if parsed is None:
        if saw_malformed:
            raise MalformedJsonError("bracket-balanced array is not valid JSON")
        raise NoJsonArrayError("no JSON array found in response")

    triples = []
    for i, element in enumerate(parsed):
        if not isinstance(element, dict):
            raise TripleShapeError(f"element {i} is not an object")
        values = []
        for key in ("subject", "predicate", "object"):
            value = element.get(key)
            if not isinstance(value, str) or not value.strip():
                raise TripleShapeError(
                    f"element {i} field {key!r} missing or not a non-empty string"
                )
            values.append(value.strip())
        triples.append(RawTriple(*values))
    return triples


def build_request(
    sentence: Sentence, candidates: CandidateSet, settings: InferenceSettings
) -> PromptRequest:
    return PromptRequest(
        sentence_id=sentence.sentence_id,
        prompt_text=compose_constrained_prompt(
            sentence, candidates.terms, candidates.verbs
        ),
        temperature=settings.temperature,
        max_new_tokens=dynamic_max_tokens(
            len(candidates.terms),
            settings.triples_per_term,
            settings.token_floor,
            settings.token_ceiling,
            settings.tokens_per_triple,
        ),
        model_name=settings.model_name,
    )


def extract_sentence_triples(
    sentence: Sentence,
    candidates: CandidateSet,
    client,
    settings: InferenceSettings,
) -> RawTripleBatch | OrphanMark:
    """Infer and strictly parse triples for one sentence, with retries.

    The prompt never changes between attempts. A valid-but-empty array
    orphans the sentence immediately; k parse failures orphan it with a
    different reason; transport errors surface only after the retry
    budget is spent. CassetteMissError is never retried, it signals
    prompt drift.
    """
    request = build_request(sentence, candidates, settings)
    last_error: Exception | None = None
    attempts = 0
    for attempt in range(1, settings.retries + 1):
        attempts = attempt
        try:
            response = infer(request, client)
        except LLMUnavailableError as exc:
            last_error = exc
            continue
        try:
            triples = parse_valid_json(response)
        except ParseError as exc:
            last_error = exc
            continue
        if not triples:
            return OrphanMark(
                sentence.sentence_id, sentence.text, "empty_result", attempts
            )
        return RawTripleBatch(sentence.sentence_id, triples, response, attempts)
    if isinstance(last_error, LLMUnavailableError):
        raise last_error
    return OrphanMark(sentence.sentence_id, sentence.text, "parse_failure", attempts)
