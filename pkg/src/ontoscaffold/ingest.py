"""Document loading and segmentation.

Turns a standards-document text file into paragraphs and sentences with
stable positional identifiers. Standards text is noisy: clause numbers
("1.01 ") at line starts, list markers, hard-wrapped lines. Clause numbers
become paragraph metadata instead of sentence tokens; everything else is
preserved.

Offsets in ``Sentence.char_span`` index into the *cleaned source*: the
document after Unicode NFC normalization and quote mapping but before any
whitespace collapsing. Sentence ``text`` is the whitespace-collapsed slice
of that span.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field

from .errors import EmptyDocumentError, InputEncodingError
from .lexicon import ABBREVIATIONS

# Clause label at line start: digits/dots then whitespace, e.g. "1.01 ", "8. ".
CLAUSE_LABEL_RE = re.compile(r"^(\d+(?:\.\d+)*)\.?[ \t]+")

_TERMINATORS = ".?!;"
_SMART_QUOTES = {
    "‘": "'", "’": "'", "‚": "'", "‛": "'",
    "“": '"', "”": '"', "„": '"', "‟": '"',
    "′": "'", "″": '"',
}
_WS_RE = re.compile(r"\s+")


def collapse_ws(text: str) -> str:
    """Collapse runs of whitespace to single spaces and trim."""
    return _WS_RE.sub(" ", text).strip()


@dataclass
class Sentence:
    sentence_id: str
    text: str
    char_span: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "text": self.text,
            "char_span": [self.char_span[0], self.char_span[1]],
        }


@dataclass
class Paragraph:
    index: int
    section_label: str | None
    sentences: list[Sentence] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "section_label": self.section_label,
            "sentences": [s.to_dict() for s in self.sentences],
        }


@dataclass
class SegmentedDocument:
    doc_id: str
    paragraphs: list[Paragraph] = field(default_factory=list)

    def sentences(self) -> list[Sentence]:
        return [s for p in self.paragraphs for s in p.sentences]

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "paragraphs": [p.to_dict() for p in self.paragraphs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SegmentedDocument":
        doc = cls(doc_id=data["doc_id"])
        for p in data["paragraphs"]:
            para = Paragraph(index=p["index"], section_label=p["section_label"])
            for s in p["sentences"]:
                para.sentences.append(
                    Sentence(
                        sentence_id=s["sentence_id"],
                        text=s["text"],
                        char_span=(s["char_span"][0], s["char_span"][1]),
                    )
                )
            doc.paragraphs.append(para)
        return doc


def clean_source(text: str) -> str:
    """Normalize a decoded document: NFC, ASCII quotes, Unix newlines."""
    text = unicodedata.normalize("NFC", text)
    for smart, plain in _SMART_QUOTES.items():
        text = text.replace(smart, plain)
    return text.replace("\r\n", "\n").replace("\r", "\n")


def _is_abbreviation(source: str, dot_pos: int) -> bool:
    """True when the '.' at dot_pos ends a known abbreviation token."""
    i = dot_pos
    while i > 0 and (source[i - 1].isalpha() or source[i - 1] == "."):
        i -= 1
    token = source[i:dot_pos].strip(".").casefold()
    return token in ABBREVIATIONS


def _find_boundaries(source: str, start: int, end: int) -> list[int]:
    """Positions just past each sentence boundary inside source[start:end]."""
    boundaries = []
    i = start
    while i < end:
        ch = source[i]
        if ch not in _TERMINATORS:
            i += 1
            continue
        # treat a run of terminators ("...", "?!") as one boundary
        run_end = i
        while run_end + 1 < end and source[run_end + 1] in _TERMINATORS:
            run_end += 1
        follows = source[run_end + 1] if run_end + 1 < end else ""
        if follows and not follows.isspace():
            # also covers dots inside decimals and clause numbers ("1.01")
            i = run_end + 1
            continue
        if ch == "." and _is_abbreviation(source, i):
            i = run_end + 1
            continue
        boundaries.append(run_end + 1)
        i = run_end + 1
    return boundaries


def split_into_sentences(
    text: str,
    doc_id: str = "doc",
    paragraph_index: int = 0,
    offset: int = 0,
    source: str | None = None,
) -> list[Sentence]:
    """Split one paragraph's text into sentences.

    Splits on sentence-final punctuation (``. ? ! ;``) followed by
    whitespace or end of text, with an abbreviation guard and a guard
    against splitting inside decimal/clause numbers. A paragraph without
    any terminator yields a single sentence. ``offset``/``source`` carry
    the position of ``text`` within the cleaned document when called from
    the loader; standalone calls may pass the text alone.
    """
    if source is None:
        source = text
        offset = 0
    start, end = offset, offset + len(text)
    cuts = _find_boundaries(source, start, end)
    if not cuts or cuts[-1] != end:
        cuts = cuts + [end]

    sentences: list[Sentence] = []
    seg_start = start
    for cut in cuts:
        raw = source[seg_start:cut]
        if not raw:
            continue
        cleaned = collapse_ws(raw)
        if not cleaned and sentences:
            # trailing whitespace tail: fold into the previous span
            prev = sentences[-1]
            prev.char_span = (prev.char_span[0], cut)
            seg_start = cut
            continue
        if not cleaned:
            seg_start = cut
            continue
        sentences.append(
            Sentence(
                sentence_id=f"{doc_id}:p{paragraph_index}:s{len(sentences)}",
                text=cleaned,
                char_span=(seg_start, cut),
            )
        )
        seg_start = cut
    return sentences


def _blocks(source: str) -> list[tuple[int, int]]:
    """Paragraph blocks as (start, end) spans over the cleaned source.

    A block is a maximal run of non-blank lines, except that a line
    opening with a clause label always starts a new block so each labeled
    clause keeps its own section metadata.
    """
    blocks: list[tuple[int, int]] = []
    open_block = False
    pos = 0
    for line in source.split("\n"):
        line_start, line_end = pos, pos + len(line)
        pos = line_end + 1
        if not line.strip():
            open_block = False
            continue
        if open_block and not CLAUSE_LABEL_RE.match(line):
            blocks[-1] = (blocks[-1][0], line_end)
        else:
            blocks.append((line_start, line_end))
            open_block = True
    return blocks


def load_document(source, doc_id: str) -> SegmentedDocument:
    """Load and segment a document from bytes, a binary stream, or str.

    Raises InputEncodingError when the bytes are not UTF-8 and
    EmptyDocumentError when no non-blank content remains.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputEncodingError(f"document is not valid UTF-8: {exc}") from exc
    cleaned = clean_source(source)

    doc = SegmentedDocument(doc_id=doc_id)
    for start, end in _blocks(cleaned):
        first_line = cleaned[start:end].split("\n", 1)[0]
        label_match = CLAUSE_LABEL_RE.match(first_line)
        section_label = None
        body_start = start
        if label_match:
            section_label = label_match.group(1)
            body_start = start + label_match.end()
        para = Paragraph(index=len(doc.paragraphs), section_label=section_label)
        para.sentences = split_into_sentences(
            cleaned[body_start:end],
            doc_id=doc_id,
            paragraph_index=para.index,
            offset=body_start,
            source=cleaned,
        )
        if para.sentences:
            doc.paragraphs.append(para)
    if not doc.paragraphs:
        raise EmptyDocumentError(f"document {doc_id!r} has no sentences")
    return doc
