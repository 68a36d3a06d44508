"""Part-of-speech tagging providers behind one small interface.

Two implementations of the same contract: a deterministic builtin
rule/lexicon tagger (no model, no network) and a remote HTTP client for
the optional tagger sidecar. Both return one token per
whitespace-or-punctuation unit plus noun-chunk index ranges, using the
coarse tag set NOUN/PROPN/ADJ/VERB/AUX/DET/PRON/OTHER.

The builtin tagger is not trying to win a tagging benchmark. It needs to
be deterministic, reasonable on standards prose, and stable enough to
freeze golden files against.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import requests

from . import lexicon
from .errors import TaggerUnavailableError

logger = logging.getLogger(__name__)

COARSE_TAGS = frozenset(
    ["NOUN", "PROPN", "ADJ", "VERB", "AUX", "DET", "PRON", "OTHER"]
)

# words keep internal hyphens/apostrophes; any other symbol is its own token
_TOKEN_RE = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]")


@dataclass(frozen=True)
class TaggedToken:
    text: str
    lemma: str
    pos_tag: str
    index: int


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def lemmatize_verb(word: str) -> str:
    """Map an inflected verb form to its lemma.

    Irregulars come from a fixed table; regular forms go through suffix
    stripping with an e-restoration check against the verb lexicon
    ("ensured" -> "ensur" -> "ensure").
    """
    w = word.casefold()
    if w in lexicon.IRREGULAR_VERB_LEMMAS:
        return lexicon.IRREGULAR_VERB_LEMMAS[w]

    def _restore(stem: str) -> str:
        if stem in lexicon.VERB_LEXICON:
            return stem
        if stem + "e" in lexicon.VERB_LEXICON:
            return stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2]:  # committ -> commit
            return stem[:-1]
        return stem

    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "zzes", "xes", "ches", "shes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
        return w[:-1]
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ed") and len(w) > 4:
        return _restore(w[:-2])
    if w.endswith("ing") and len(w) > 5:
        return _restore(w[:-3])
    return w


def _first_pass_tag(token: str, index: int) -> str:
    folded = token.casefold()
    if not token[0].isalnum():
        return "OTHER"
    if token.isdigit():
        return "OTHER"
    if folded in lexicon.DETERMINERS:
        return "DET"
    if folded in lexicon.PRONOUNS:
        return "PRON"
    if folded in lexicon.AUXILIARIES:
        return "AUX"
    if folded in lexicon.PREPOSITIONS or folded in lexicon.CONJUNCTIONS:
        return "OTHER"
    if folded in lexicon.NEGATIONS:
        return "OTHER"
    if index > 0 and token[0].isupper() and not token.isupper():
        return "PROPN"
    if folded.endswith("ly") and len(folded) > 3:
        return "OTHER"  # adverb
    if folded in lexicon.VERB_LEXICON or lemmatize_verb(folded) in lexicon.VERB_LEXICON:
        return "VERB"
    if folded in lexicon.ADJECTIVE_LEXICON:
        return "ADJ"
    if folded.endswith(lexicon.VERB_SUFFIXES) or lemmatize_verb(folded).endswith(
        lexicon.VERB_SUFFIXES
    ):
        return "VERB"
    if folded.endswith(lexicon.ADJECTIVE_SUFFIXES):
        return "ADJ"
    if "-" in token:
        return "ADJ"  # hyphenated modifiers: "well-founded"
    return "NOUN"


def _apply_context_rules(tokens: list[str], tags: list[str]) -> None:
    for i in range(len(tags)):
        if tags[i] != "NOUN":
            continue
        # bare form right after a modal/auxiliary: "shall act"
        if i > 0 and tags[i - 1] == "AUX":
            tags[i] = "VERB"
            continue
        # coordination with a verb: "act and maintain"
        if (
            i >= 2
            and tokens[i - 1].casefold() in ("and", "or")
            and tags[i - 2] == "VERB"
        ):
            tags[i] = "VERB"


def _noun_chunks(tags: list[str]) -> list[tuple[int, int]]:
    """Maximal ADJ/NOUN/PROPN runs ending on a NOUN/PROPN head.

    An immediately preceding DET or PRON is folded into the chunk so the
    downstream determiner-drop rule sees it, mirroring how chunkers
    usually emit "the public interest".
    """
    chunks: list[tuple[int, int]] = []
    i = 0
    n = len(tags)
    while i < n:
        if tags[i] not in ("ADJ", "NOUN", "PROPN"):
            i += 1
            continue
        j = i
        while j < n and tags[j] in ("ADJ", "NOUN", "PROPN"):
            j += 1
        end = j
        while end > i and tags[end - 1] == "ADJ":  # trim trailing modifiers
            end -= 1
        if end > i and any(tags[k] in ("NOUN", "PROPN") for k in range(i, end)):
            start = i
            if start > 0 and tags[start - 1] in ("DET", "PRON"):
                start -= 1
            chunks.append((start, end))
        i = j
    return chunks


class BuiltinTagger:
    """Deterministic rule/lexicon tagger; the always-available provider."""

    mode = "builtin"

    def tag(self, text: str) -> tuple[list[TaggedToken], list[tuple[int, int]]]:
        if not text or not text.strip():
            raise ValueError("cannot tag empty text")
        words = tokenize(text)
        tags = [_first_pass_tag(tok, i) for i, tok in enumerate(words)]
        _apply_context_rules(words, tags)
        tokens = []
        for i, (tok, tag) in enumerate(zip(words, tags)):
            if tag in ("VERB", "AUX"):
                lemma = lemmatize_verb(tok)
            else:
                lemma = tok.casefold()
            tokens.append(TaggedToken(text=tok, lemma=lemma, pos_tag=tag, index=i))
        return tokens, _noun_chunks(tags)


class RemoteTagger:
    """Client for the tagger sidecar's POST /tag wire protocol."""

    mode = "remote"

    def __init__(self, endpoint: str, timeout: float = 10.0, session=None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self._session = session or requests.Session()

    def tag(self, text: str) -> tuple[list[TaggedToken], list[tuple[int, int]]]:
        if not text or not text.strip():
            raise ValueError("cannot tag empty text")
        try:
            resp = self._session.post(
                f"{self.endpoint}/tag", json={"text": text}, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise TaggerUnavailableError(f"remote tagger failed: {exc}") from exc
        return _parse_tag_response(payload)


def _parse_tag_response(payload: dict) -> tuple[list[TaggedToken], list[tuple[int, int]]]:
    try:
        raw_tokens = payload["tokens"]
        raw_chunks = payload["noun_chunks"]
        tokens = []
        for i, tok in enumerate(raw_tokens):
            if tok["index"] != i:
                raise TaggerUnavailableError(
                    f"remote tagger returned non-contiguous token index {tok['index']}"
                )
            pos = tok["pos"] if tok["pos"] in COARSE_TAGS else "OTHER"
            tokens.append(
                TaggedToken(text=tok["text"], lemma=tok["lemma"], pos_tag=pos, index=i)
            )
        chunks = []
        last_end = 0
        for ch in raw_chunks:
            start, end = int(ch["start"]), int(ch["end"])
            if not (0 <= start < end <= len(tokens)) or start < last_end:
                raise TaggerUnavailableError(
                    f"remote tagger returned invalid chunk range [{start}, {end})"
                )
            chunks.append((start, end))
            last_end = end
    except (KeyError, TypeError) as exc:
        raise TaggerUnavailableError(f"malformed tagger response: {exc}") from exc
    return tokens, chunks


class FallbackTagger:
    """Remote tagger that degrades to the builtin one with a warning."""

    mode = "remote"

    def __init__(self, remote: RemoteTagger, builtin: BuiltinTagger | None = None):
        self.remote = remote
        self.builtin = builtin or BuiltinTagger()

    def tag(self, text: str):
        try:
            return self.remote.tag(text)
        except TaggerUnavailableError as exc:
            logger.warning("remote tagger unavailable, using builtin: %s", exc)
            return self.builtin.tag(text)
