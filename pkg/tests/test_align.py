from __future__ import annotations

import random

import pytest

from ontoscaffold.align import align_nodes, canonical_label
from ontoscaffold.errors import ConfigError
from ontoscaffold.graph import Node, ScaffoldGraph
from ontoscaffold.inference import OrphanMark
from ontoscaffold.normalize import ValidatedTriple
from ontoscaffold.similarity import ExactSimilarity, TrigramSimilarity


class MatrixSimilarity:
    """Test provider: similarities scripted per unordered label pair."""

    backend = "scripted"

    def __init__(self, table):
        self.table = table

    def similarity(self, a, b):
        if a == b:
            return 1.0
        return self.table.get((a, b), self.table.get((b, a), 0.0))

    def similarity_matrix(self, rows, cols):
        return [[self.similarity(r, c) for c in cols] for r in rows]


def vt(subject, predicate, obj, sentence_id="d:p0:s0"):
    return ValidatedTriple(subject, predicate, obj, sentence_id)


def oracle_clusters(labels, provider, threshold):
    """Transitive closure of the >=threshold relation, by brute force."""
    n = len(labels)
    reach = [
        [
            i == j or provider.similarity(labels[i], labels[j]) >= threshold
            for j in range(n)
        ]
        for i in range(n)
    ]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    clusters = set()
    for i in range(n):
        clusters.add(frozenset(labels[j] for j in range(n) if reach[i][j]))
    return clusters


def test_identical_labels_merge_to_frequent_form():
    graph = ScaffoldGraph()
    graph.add_triple(vt("public interest", "guides", "software engineer", "d:p0:s0"))
    graph.add_triple(vt("public interest", "guides", "engineer", "d:p1:s0"))
    graph.add_triple(vt("publik interest", "guides", "engineer", "d:p2:s0"))
    aligned, merge_map = align_nodes(graph, TrigramSimilarity(), 0.8)
    assert merge_map.canonical("publik interest") == "public interest"
    assert aligned.node("publik interest") is None
    assert aligned.node("public interest") is not None


def test_exact_backend_threshold_one_is_identity(fixture_extract):
    graph = fixture_extract.graph
    aligned, merge_map = align_nodes(graph, ExactSimilarity(), 1.0)
    assert aligned.to_json() == graph.to_json()
    assert all(k == v for k, v in merge_map.mapping.items())


def test_clusters_match_closure_oracle_straddling_threshold():
    table = {
        ("alpha one", "alpha two"): 0.9,
        ("alpha two", "alpha three"): 0.85,
        ("alpha three", "beta one"): 0.5,
        ("beta one", "beta two"): 0.99,
    }
    provider = MatrixSimilarity(table)
    graph = ScaffoldGraph()
    for i, label in enumerate(
        ["alpha one", "alpha two", "alpha three", "beta one", "beta two"]
    ):
        graph.add_triple(vt(label, "links", "anchor", f"d:p{i}:s0"))
    labels = [n.label for n in graph.nodes if n.kind == "term"]
    aligned, merge_map = align_nodes(graph, provider, 0.8)

    expected = oracle_clusters(labels, provider, 0.8)
    got: dict[str, set] = {}
    for label in labels:
        got.setdefault(merge_map.canonical(label), set()).add(label)
    assert {frozenset(v) for v in got.values()} == expected


def test_random_fixtures_match_closure_oracle():
    rng = random.Random(99)
    for _ in range(25):
        n = rng.randint(2, 12)
        labels = [f"term {i}" for i in range(n)]
        table = {}
        for i in range(n):
            for j in range(i + 1, n):
                table[(labels[i], labels[j])] = round(rng.random(), 3)
        provider = MatrixSimilarity(table)
        graph = ScaffoldGraph()
        for i, label in enumerate(labels):
            graph.add_triple(vt(label, "links", labels[(i + 1) % n], f"d:p{i}:s0"))
        threshold = round(rng.uniform(0.2, 0.95), 3)
        _, merge_map = align_nodes(graph, provider, threshold)
        got: dict[str, set] = {}
        for label in labels:
            got.setdefault(merge_map.canonical(label), set()).add(label)
        assert {frozenset(v) for v in got.values()} == oracle_clusters(
            labels, provider, threshold
        )


def test_alignment_preserves_provenance_and_never_grows():
    graph = ScaffoldGraph()
    graph.add_triple(vt("node one", "r", "node two", "d:p0:s0"))
    graph.add_triple(vt("node one", "r", "node three", "d:p1:s0"))
    graph.add_triple(vt("node   one", "r", "node two", "d:p2:s0"))
    total_before = sum(len(n.provenance) for n in graph.nodes)
    aligned, _ = align_nodes(graph, TrigramSimilarity(), 0.7)
    assert aligned.stats().node_count <= graph.stats().node_count
    assert sum(len(n.provenance) for n in aligned.nodes) == total_before


def test_merge_map_idempotent(fixture_extract):
    _, merge_map = align_nodes(fixture_extract.graph, TrigramSimilarity(), 0.85)
    for original in merge_map.mapping:
        once = merge_map.canonical(original)
        assert merge_map.canonical(once) == once


def test_orphan_nodes_never_merge():
    graph = ScaffoldGraph()
    graph.add_triple(vt("orphan sentence text", "r", "other node"))
    graph.insert_orphans(
        [OrphanMark("d:p5:s0", "orphan sentence texts!", "no_verbs")]
    )
    orphan_label = "orphan sentence texts!"  # normalized orphan form
    assert graph.stats().node_count == 3
    assert TrigramSimilarity().similarity("orphan sentence text", orphan_label) > 0.5
    aligned, merge_map = align_nodes(graph, TrigramSimilarity(), 0.5)
    # near-identical strings, but the orphan node must survive untouched
    kinds = {n.label: n.kind for n in aligned.nodes}
    assert kinds[orphan_label] == "orphan_sentence"
    assert merge_map.canonical(orphan_label) == orphan_label
    assert aligned.node("orphan sentence text").kind == "term"


def test_canonical_label_rules():
    a = Node("public interest", "term", ["s0", "s1", "s2"])
    b = Node("the public's interest", "term", ["s3"])
    assert canonical_label([a, b]) == "public interest"
    assert canonical_label([b]) == "the public's interest"
    c = Node("abc", "term", ["s0"])
    d = Node("abd", "term", ["s1"])
    assert canonical_label([c, d]) == "abc"  # counts and lengths tie: lexical


def test_bad_threshold_rejected(fixture_extract):
    with pytest.raises(ConfigError):
        align_nodes(fixture_extract.graph, ExactSimilarity(), 0.0)
    with pytest.raises(ConfigError):
        align_nodes(fixture_extract.graph, ExactSimilarity(), 1.5)
