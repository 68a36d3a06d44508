"""Per-sentence candidate mining: entity terms and relation verbs.

For each sentence the tagger yields tokens and noun-chunk ranges; from
those we build the candidate term list (noun phrases, determiners
dropped, adjectives kept) and the verb vocabulary (lemmas, modals
excluded unless nothing else verb-like exists). Both lists then go
through clean_dedup, which is deliberately idempotent so repeated
cleaning can never change results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexicon
from .ingest import Sentence, collapse_ws
from .tagging import TaggedToken


@dataclass
class CandidateSet:
    sentence_id: str
    terms: list[str] = field(default_factory=list)
    verbs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "terms": list(self.terms),
            "verbs": list(self.verbs),
        }


def extract_noun_phrases(
    tokens: list[TaggedToken], noun_chunks: list[tuple[int, int]]
) -> list[str]:
    """One candidate string per noun chunk.

    Leading determiners and pronouns are dropped; a chunk that is nothing
    but determiners/pronouns ("they") disappears entirely. Adjectives
    stay: modifiers carry meaning in standards text.
    """
    phrases = []
    for start, end in noun_chunks:
        chunk = tokens[start:end]
        while chunk and chunk[0].pos_tag in ("DET", "PRON"):
            chunk = chunk[1:]
        if not chunk or all(t.pos_tag == "PRON" for t in chunk):
            continue
        phrases.append(" ".join(t.text for t in chunk))
    return phrases


def extract_verbs(tokens: list[TaggedToken]) -> list[str]:
    """Lemmas of VERB tokens; auxiliaries only as a last resort.

    A sentence like "software is a product" has no main verb, so the
    copula's lemma ("be") stands in rather than leaving the relation
    vocabulary empty.
    """
    verbs = [t.lemma for t in tokens if t.pos_tag == "VERB"]
    if verbs:
        return verbs
    return [t.lemma for t in tokens if t.pos_tag == "AUX"]


def _strip_leading_determiners(text: str) -> str:
    words = text.split()
    while words and words[0].casefold() in lexicon.DETERMINERS:
        words = words[1:]
    return " ".join(words)


def clean_dedup(items: list[str]) -> list[str]:
    """Clean candidate strings and drop duplicates, keeping first-seen order.

    Rules: trim and collapse whitespace; strip leading determiners; drop
    entries shorter than 2 characters; drop entries made entirely of
    stopwords; deduplicate case-folded while keeping the first surface
    form. Idempotent by construction.
    """
    out: list[str] = []
    seen: set[str] = set()
    for item in items:
        cleaned = _strip_leading_determiners(collapse_ws(item))
        if len(cleaned) < 2:
            continue
        words = cleaned.split()
        if all(w.casefold() in lexicon.STOPWORDS for w in words):
            continue
        key = cleaned.casefold()
        if key in seen:
            continue
        seen.add(key)
        out.append(cleaned)
    return out


def mine_candidates(sentence: Sentence, provider) -> CandidateSet:
    """Run the tagger on one sentence and clean both candidate lists."""
    tokens, chunks = provider.tag(sentence.text)
    return CandidateSet(
        sentence_id=sentence.sentence_id,
        terms=clean_dedup(extract_noun_phrases(tokens, chunks)),
        verbs=clean_dedup(extract_verbs(tokens)),
    )
