"""End-to-end extraction: ingest -> mine -> infer -> validate -> assemble.

Sentence-level LLM work runs on a bounded thread pool, but results are
merged strictly in document order, so a replayed run produces
byte-identical artifacts regardless of completion timing. The manifest
reconciles counts stage by stage: every sentence exits exactly once, as
a gated skip, an orphan, or a triple batch.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig, llm_api_key
from .graph import ScaffoldGraph
from .inference import OrphanMark, RawTripleBatch, extract_sentence_triples
from .ingest import SegmentedDocument, load_document
from .llm import LiveClient, RecordingClient, ReplayClient
from .errors import ConfigError
from .mining import CandidateSet, mine_candidates
from .normalize import Rejection, ValidatedTriple, validate_triple
from .tagging import BuiltinTagger, FallbackTagger, RemoteTagger

logger = logging.getLogger(__name__)


def _utc_stamp() -> str:
    # SOURCE_DATE_EPOCH pins timestamps for reproducible runs
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    config: dict
    input_sha256: str
    cassette_sha256: str | None
    counts: dict
    started_at: str
    finished_at: str

    def reconciles(self) -> bool:
        c = self.counts
        return c["sentences"] == (
            c["gated_skips"] + c["orphans"] + c["sentences_with_batches"]
        )

    def to_json(self) -> str:
        return (
            json.dumps(
                {
                    "config": self.config,
                    "input_sha256": self.input_sha256,
                    "cassette_sha256": self.cassette_sha256,
                    "counts": self.counts,
                    "started_at": self.started_at,
                    "finished_at": self.finished_at,
                },
                indent=2,
                sort_keys=True,
                ensure_ascii=False,
            )
            + "\n"
        )


@dataclass
class ExtractResult:
    document: SegmentedDocument
    graph: ScaffoldGraph
    manifest: RunManifest
    orphans: list[OrphanMark] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)


def make_tagger(config: RunConfig):
    if config.tagger.mode == "builtin":
        return BuiltinTagger()
    remote = RemoteTagger(config.tagger.endpoint, timeout=config.tagger.timeout)
    if config.tagger.fallback_to_builtin:
        return FallbackTagger(remote)
    return remote


def make_llm_client(config: RunConfig, backend: str, cassette: str | Path | None):
    """Build the LLM client for --replay/--record/--live."""
    if backend == "replay":
        if not cassette:
            raise ConfigError("replay backend requires a cassette path")
        return ReplayClient(cassette)
    if not config.llm.endpoint:
        raise ConfigError(f"{backend} backend requires llm.endpoint")
    live = LiveClient(
        config.llm.endpoint, api_key=llm_api_key(), timeout=config.llm.timeout
    )
    if backend == "live":
        return live
    if backend == "record":
        if not cassette:
            raise ConfigError("record backend requires a cassette path")
        return RecordingClient(live, cassette)
    raise ConfigError(f"unknown LLM backend {backend!r}")


def gate_candidates(candidates: CandidateSet) -> str:
    """Decide a sentence's route before any LLM call.

    No terms and no verbs: skip outright. Terms but no verbs: orphan
    directly, there is no relation vocabulary to anchor a prompt. No
    terms: skip, nothing to constrain subjects/objects to.
    """
    if not candidates.terms and not candidates.verbs:
        return "skip"
    if candidates.terms and not candidates.verbs:
        return "orphan"
    if not candidates.terms:
        return "skip"
    return "infer"


def run_extract(
    config: RunConfig,
    client,
    cassette_path: str | Path | None = None,
) -> ExtractResult:
    started = _utc_stamp()
    if not config.document:
        raise ConfigError("config.document is required for extraction")
    doc_path = Path(config.document)
    with open(doc_path, "rb") as fh:
        raw = fh.read()
    document = load_document(raw, doc_id=doc_path.stem)

    tagger = make_tagger(config)
    section_by_sentence: dict[str, str | None] = {}
    sentences = []
    for para in document.paragraphs:
        for sentence in para.sentences:
            sentences.append(sentence)
            section_by_sentence[sentence.sentence_id] = para.section_label

    mined = [mine_candidates(s, tagger) for s in sentences]

    to_infer = []
    orphans: list[OrphanMark] = []
    gated_skips = 0
    for sentence, candidates in zip(sentences, mined):
        route = gate_candidates(candidates)
        if route == "skip":
            gated_skips += 1
            logger.debug("gate: skipping %s (no candidates)", sentence.sentence_id)
        elif route == "orphan":
            orphans.append(
                OrphanMark(sentence.sentence_id, sentence.text, "no_verbs")
            )
            logger.debug("gate: orphaning %s (no verbs)", sentence.sentence_id)
        else:
            to_infer.append((sentence, candidates))

    settings = config.llm.inference_settings()
    outcomes: list[RawTripleBatch | OrphanMark]
    if to_infer:
        with ThreadPoolExecutor(max_workers=config.llm.max_in_flight) as pool:
            # map() preserves submission order: results merge in document order
            outcomes = list(
                pool.map(
                    lambda pair: extract_sentence_triples(
                        pair[0], pair[1], client, settings
                    ),
                    to_infer,
                )
            )
    else:
        outcomes = []

    graph = ScaffoldGraph()
    rejections: list[Rejection] = []
    triples_raw = 0
    sentences_with_batches = 0
    candidates_by_id = {c.sentence_id: c for c in mined}
    for outcome in outcomes:
        if isinstance(outcome, OrphanMark):
            orphans.append(outcome)
            continue
        sentences_with_batches += 1
        candidates = candidates_by_id[outcome.sentence_id]
        for raw_triple in outcome.triples:
            triples_raw += 1
            verdict = validate_triple(
                raw_triple,
                candidates,
                policy=config.validation_policy,
                section_label=section_by_sentence[outcome.sentence_id],
            )
            if isinstance(verdict, ValidatedTriple):
                graph.add_triple(verdict)
            else:
                rejections.append(verdict)

    # document order: gate orphans were appended first, then LLM orphans
    order = {s.sentence_id: i for i, s in enumerate(sentences)}
    orphans.sort(key=lambda o: order[o.sentence_id])
    graph.insert_orphans(orphans)

    counts = {
        "sentences": len(sentences),
        "gated_skips": gated_skips,
        "orphans": len(orphans),
        "sentences_with_batches": sentences_with_batches,
        "triples_raw": triples_raw,
        "triples_validated": len(graph.edges),
        "triples_rejected": len(rejections),
        "raw_assertions": graph.raw_assertion_count,
    }
    manifest = RunManifest(
        config=config.to_dict(),
        input_sha256=hashlib.sha256(raw).hexdigest(),
        cassette_sha256=sha256_file(cassette_path) if cassette_path else None,
        counts=counts,
        started_at=started,
        finished_at=_utc_stamp(),
    )
    return ExtractResult(document, graph, manifest, orphans, rejections)


def write_artifacts(result: ExtractResult, out_dir: str | Path) -> dict[str, Path]:
    """Write graph/manifest/orphans/rejections files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "graph": out / "graph.json",
        "manifest": out / "manifest.json",
        "orphans": out / "orphans.jsonl",
        "rejections": out / "rejections.jsonl",
        "document": out / "document.json",
    }
    paths["graph"].write_text(result.graph.to_json(), encoding="utf-8")
    paths["manifest"].write_text(result.manifest.to_json(), encoding="utf-8")
    with open(paths["orphans"], "w", encoding="utf-8") as fh:
        for orphan in result.orphans:
            fh.write(json.dumps(orphan.to_dict(), ensure_ascii=False) + "\n")
    with open(paths["rejections"], "w", encoding="utf-8") as fh:
        for rejection in result.rejections:
            fh.write(json.dumps(rejection.to_dict(), ensure_ascii=False) + "\n")
    paths["document"].write_text(result.document.to_json(), encoding="utf-8")
    return paths
