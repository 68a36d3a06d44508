#!/usr/bin/env python3
"""Regenerate the bundled fixtures: LLM cassette and embedding cache.

The cassette responses below are handcrafted per sentence to exercise
every pipeline path: plain arrays, prose-wrapped arrays, code fences,
an invalid-JSON response (parse-failure orphan), an empty array
(empty-result orphan), repaired endpoints, and rejected triples.

Run from the repo root after any change to segmentation, mining, or
prompt wording:

    python3 scripts/build_fixtures.py

Committing the regenerated files is deliberate: replay fingerprints
freeze the prompt contract, and acceptance tests fail loudly on drift.
"""

import hashlib
import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from ontoscaffold.config import RunConfig  # noqa: E402
from ontoscaffold.evaluate import PredictionSet, load_gold  # noqa: E402
from ontoscaffold.inference import build_request  # noqa: E402
from ontoscaffold.ingest import load_document  # noqa: E402
from ontoscaffold.llm import ReplayClient, request_fingerprint  # noqa: E402
from ontoscaffold.mining import mine_candidates  # noqa: E402
from ontoscaffold.pipeline import gate_candidates, run_extract  # noqa: E402
from ontoscaffold.tagging import BuiltinTagger  # noqa: E402

DOC = REPO / "fixtures" / "secepp_short.txt"
CASSETTE = REPO / "fixtures" / "cassette.jsonl"
EMBEDDINGS = REPO / "fixtures" / "embeddings.jsonl"
MINI_GOLD = REPO / "fixtures" / "mini_gold.json"
EMBEDDING_MODEL = "fixture-embedding"

RESPONSES = {
    "secepp_short:p2:s0": (
        '[{"subject": "the short version", "predicate": "summarizes",'
        ' "object": "aspirations"}]'
    ),
    "secepp_short:p2:s1": (
        "Sure! Here are the triples: "
        '[{"subject": "details", "predicate": "can become",'
        ' "object": "legalistic"}] Hope this helps.'
    ),
    # invalid JSON on purpose: the sentence must orphan after 3 attempts
    "secepp_short:p2:s2": (
        "The aspirations can become high sounding but empty, so I cannot"
        " produce triples here."
    ),
    # valid but empty: orphaned immediately
    "secepp_short:p2:s3": "[]",
    "secepp_short:p2:s4": (
        '[{"subject": "Software engineers", "predicate": "shall commit to",'
        ' "object": "the profession"},'
        ' {"subject": "software engineers", "predicate": "make",'
        ' "object": "software"}]'
    ),
    "secepp_short:p3:s0": (
        "```json\n"
        '[{"subject": "software engineers",'
        ' "predicate": "shall act consistently with",'
        ' "object": "the public interest"}]\n'
        "```"
    ),
    "secepp_short:p4:s0": (
        '[{"subject": "software engineers",'
        ' "predicate": "shall act in the best interests of",'
        ' "object": "their client"},'
        ' {"subject": "software engineers",'
        ' "predicate": "shall act in the best interests of",'
        ' "object": "employer"}]'
    ),
    "secepp_short:p5:s0": (
        '[{"subject": "their products", "predicate": "meet",'
        ' "object": "the highest professional standards"},'
        ' {"subject": "related modifications", "predicate": "meet",'
        ' "object": "highest professional standards"}]'
    ),
    "secepp_short:p6:s0": (
        '[{"subject": "software engineers", "predicate": "shall maintain",'
        ' "object": "integrity"},'
        ' {"subject": "software engineers", "predicate": "shall maintain",'
        ' "object": "independence"},'
        ' {"subject": "software engineers",'
        ' "predicate": "maintain independence in",'
        ' "object": "professional judgment"}]'
    ),
    # "managers" resolves to "software engineering manager" by containment
    "secepp_short:p7:s0": (
        '[{"subject": "managers", "predicate": "shall promote",'
        ' "object": "an ethical approach"},'
        ' {"subject": "leaders", "predicate": "subscribe to",'
        ' "object": "ethical approach"}]'
    ),
    # second triple is ambiguous (reputation vs profession): rejected
    "secepp_short:p8:s0": (
        "Here is the extraction you asked for:\n"
        '[{"subject": "software engineers", "predicate": "shall advance",'
        ' "object": "the integrity"},'
        ' {"subject": "software engineers", "predicate": "shall advance",'
        ' "object": "reputation of the profession"}]'
    ),
    "secepp_short:p10:s0": (
        '[{"subject": "software engineers",'
        ' "predicate": "shall participate in",'
        ' "object": "lifelong learning"},'
        ' {"subject": "software engineers", "predicate": "shall promote",'
        ' "object": "an ethical approach"}]'
    ),
    # subject is outside the candidate terms: the whole batch is rejected
    "secepp_short:p11:s0": (
        '[{"subject": "software engineers", "predicate": "accept",'
        ' "object": "full responsibility"}]'
    ),
    "secepp_short:p12:s0": (
        '[{"subject": "achievable goals", "predicate": "are ensured for",'
        ' "object": "any project"},'
        ' {"subject": "objectives", "predicate": "are ensured for",'
        ' "object": "the project"}]'
    ),
    "secepp_short:p13:s0": (
        '[{"subject": "software engineers", "predicate": "take",'
        ' "object": "responsibility"},'
        ' {"subject": "errors", "predicate": "are reported in",'
        ' "object": "software"}]'
    ),
}


def deterministic_vector(text: str, dims: int = 32) -> list[float]:
    seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")
    rng = random.Random(seed)
    raw = [rng.uniform(-1.0, 1.0) for _ in range(dims)]
    norm = sum(x * x for x in raw) ** 0.5
    return [x / norm for x in raw]


def build_cassette() -> None:
    config = RunConfig(document=str(DOC)).validate()
    document = load_document(DOC.read_bytes(), doc_id=DOC.stem)
    tagger = BuiltinTagger()
    settings = config.llm.inference_settings()

    entries = []
    unused = dict(RESPONSES)
    for sentence in document.sentences():
        candidates = mine_candidates(sentence, tagger)
        if gate_candidates(candidates) != "infer":
            continue
        response = unused.pop(sentence.sentence_id, None)
        if response is None:
            raise SystemExit(
                f"no scripted response for {sentence.sentence_id}: {sentence.text!r}"
            )
        request = build_request(sentence, candidates, settings)
        entries.append(
            {"fingerprint": request_fingerprint(request), "response": response}
        )
    if unused:
        raise SystemExit(f"scripted responses never reached: {sorted(unused)}")
    with open(CASSETTE, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
    print(f"cassette: {len(entries)} entries -> {CASSETTE}")


def build_embeddings() -> None:
    config = RunConfig(document=str(DOC)).validate()
    result = run_extract(config, ReplayClient(CASSETTE), cassette_path=CASSETTE)
    pred = PredictionSet.from_graph(result.graph)
    texts = list(dict.fromkeys(pred.node_labels + pred.triple_strings))
    if MINI_GOLD.exists():
        gold = load_gold(MINI_GOLD)
        texts += [t for t in gold.node_labels() if t not in texts]
        texts += [t for t in gold.triple_strings() if t not in texts]
    with open(EMBEDDINGS, "w", encoding="utf-8") as fh:
        for text in texts:
            fh.write(
                json.dumps(
                    {
                        "model": EMBEDDING_MODEL,
                        "text": text,
                        "vector": deterministic_vector(text),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(f"embeddings: {len(texts)} texts -> {EMBEDDINGS}")

    stats = result.graph.stats()
    print(f"graph: {stats.node_count} nodes, {stats.triple_count} triples, "
          f"{stats.island_count} islands")
    print(f"manifest counts: {result.manifest.counts}")
    for edge in result.graph.edges:
        print(f"  {edge.subject_label} | {edge.predicate} | {edge.object_label}")
    print("orphans:")
    for orphan in result.orphans:
        print(f"  [{orphan.reason}] {orphan.sentence_id}: {orphan.text[:60]}")


if __name__ == "__main__":
    build_cassette()
    build_embeddings()
