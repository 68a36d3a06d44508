"""Term normalization and post-hoc triple validation.

normalize_term is the single canonical-form function used everywhere a
string becomes (or is compared against) a graph node label. It iterates
its cleaning pass to a fixed point, which makes idempotence a structural
guarantee rather than a hope.

validate_triple enforces the constrained-prompt contract after the fact:
LLMs drift, so subjects/objects must resolve back to the sentence's
candidate terms (exactly, or by unique containment), and predicates are
checked against the verb vocabulary by head lemma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexicon
from .ingest import collapse_ws
from .mining import CandidateSet
from .tagging import lemmatize_verb, tokenize

_NORMALIZE_DETERMINERS = frozenset(
    ["the", "a", "an", "this", "that", "these", "those"]
)
_QUOTE_CHARS = "\"'‘’“”"

# tokens skipped when looking for a predicate's head verb, counted from the end
_PREDICATE_TAIL_SKIP = (
    lexicon.PREPOSITIONS
    | lexicon.CONJUNCTIONS
    | lexicon.DETERMINERS
    | lexicon.PRONOUNS
    | lexicon.NEGATIONS
)


@dataclass(frozen=True)
class RawTriple:
    subject: str
    predicate: str
    object: str

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "predicate": self.predicate,
            "object": self.object,
        }


@dataclass
class ValidatedTriple:
    subject: str
    predicate: str
    object: str
    sentence_id: str
    section_label: str | None = None
    flags: set[str] = field(default_factory=set)


@dataclass
class Rejection:
    sentence_id: str
    raw: RawTriple
    reason: str

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "raw": self.raw.to_dict(),
            "reason": self.reason,
        }


def _singularize_final_token(text: str) -> str:
    words = text.split()
    if not words:
        return text
    w = words[-1]
    if w in lexicon.IRREGULAR_SINGULARS:
        words[-1] = lexicon.IRREGULAR_SINGULARS[w]
    elif w.endswith("ies") and len(w) > 4:
        words[-1] = w[:-3] + "y"
    elif w.endswith(("sses", "zzes", "xes", "ches", "shes")):
        words[-1] = w[:-2]
    elif w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > 3:
        words[-1] = w[:-1]
    return " ".join(words)


def _normalize_pass(s: str) -> str:
    s = collapse_ws(s)
    while len(s) >= 2 and s[0] in _QUOTE_CHARS and s[-1] in _QUOTE_CHARS:
        s = s[1:-1].strip()
    s = s.casefold()
    words = s.split()
    while words and words[0] in _NORMALIZE_DETERMINERS:
        words = words[1:]
    return _singularize_final_token(" ".join(words))


def normalize_term(s: str) -> str:
    """Canonical lowercase form of a term; idempotent by fixpoint iteration.

    Trim, collapse whitespace, strip enclosing quotes, case-fold, strip
    leading determiners, singularize the final token. The pass repeats
    until the string stops changing (each changing pass only removes
    characters, so this terminates).
    """
    current = s
    while True:
        nxt = _normalize_pass(current)
        if nxt == current:
            return current
        current = nxt


def _is_function_word(folded: str) -> bool:
    if folded in _PREDICATE_TAIL_SKIP:
        return True
    return folded.endswith("ly") and len(folded) > 3  # adverb heuristic


def _is_verb_like(folded: str) -> bool:
    if folded in lexicon.AUXILIARIES or folded in lexicon.IRREGULAR_VERB_LEMMAS:
        return True
    if folded in lexicon.VERB_LEXICON or lemmatize_verb(folded) in lexicon.VERB_LEXICON:
        return True
    return folded.endswith(lexicon.VERB_SUFFIXES)


def predicate_head_lemma(predicate: str) -> str | None:
    """Lemma of the predicate phrase's head verb.

    The head is the last verb-like token once function words and adverbs
    are skipped ("shall act consistently with" -> act, "shall be fair
    to" -> be); when nothing looks like a verb, the last content token
    stands in.
    """
    words = [w.casefold() for w in tokenize(predicate) if w[0].isalnum()]
    content = [w for w in reversed(words) if not _is_function_word(w)]
    for w in content:
        if _is_verb_like(w):
            return lemmatize_verb(w)
    return lemmatize_verb(content[0]) if content else None


def _resolve_endpoint(
    value: str, normalized_candidates: list[str]
) -> tuple[str | None, bool, str | None]:
    """Match a normalized endpoint against candidates.

    Returns (resolved, repaired, failure_reason). Exact match wins;
    otherwise a containment match (candidate substring of the value or
    vice versa) is accepted only when exactly one candidate qualifies.
    """
    norm = normalize_term(value)
    if not norm:
        return None, False, "empty after normalization"
    if norm in normalized_candidates:
        return norm, False, None
    contains = [c for c in normalized_candidates if c in norm or norm in c]
    if len(contains) == 1:
        return contains[0], True, None
    if len(contains) > 1:
        return None, False, f"ambiguous containment: {sorted(contains)!r}"
    return None, False, "no candidate match"


def validate_triple(
    raw: RawTriple,
    candidates: CandidateSet,
    policy: str = "lenient",
    section_label: str | None = None,
):
    """Check a raw triple against its sentence's candidate constraint.

    Returns a ValidatedTriple or a Rejection. policy only affects
    predicates: "strict" rejects predicates whose head lemma is outside
    the verb vocabulary, "lenient" keeps them flagged
    predicate_outside_vocab.
    """
    if policy not in ("strict", "lenient"):
        raise ValueError(f"unknown validation policy {policy!r}")
    normalized_candidates = []
    for term in candidates.terms:
        norm = normalize_term(term)
        if norm and norm not in normalized_candidates:
            normalized_candidates.append(norm)

    flags: set[str] = set()
    subject, sub_repaired, sub_fail = _resolve_endpoint(
        raw.subject, normalized_candidates
    )
    if subject is None:
        return Rejection(candidates.sentence_id, raw, f"subject: {sub_fail}")
    obj, obj_repaired, obj_fail = _resolve_endpoint(raw.object, normalized_candidates)
    if obj is None:
        return Rejection(candidates.sentence_id, raw, f"object: {obj_fail}")
    if sub_repaired:
        flags.add("subject_repaired")
    if obj_repaired:
        flags.add("object_repaired")

    predicate = collapse_ws(raw.predicate)
    if not predicate:
        return Rejection(candidates.sentence_id, raw, "predicate: empty")
    head = predicate_head_lemma(predicate)
    vocab = {lemmatize_verb(v) for v in candidates.verbs}
    if head is None or head not in vocab:
        if policy == "strict":
            return Rejection(
                candidates.sentence_id,
                raw,
                f"predicate: head lemma {head!r} outside verb vocabulary",
            )
        flags.add("predicate_outside_vocab")

    return ValidatedTriple(
        subject=subject,
        predicate=predicate,
        object=obj,
        sentence_id=candidates.sentence_id,
        section_label=section_label,
        flags=flags,
    )
