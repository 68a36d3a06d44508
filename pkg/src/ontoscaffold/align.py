"""Cross-section term consolidation.

Terms repeat across sections of a standard in slightly different
surface forms; this merges near-duplicate term nodes via single-link
clustering (union-find over the >=threshold pair relation). Merging is
destructive, so the default threshold sits well above the evaluation
sweep's trust region, orphan-sentence nodes never participate, and every
rewrite is recorded in an auditable MergeMap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConfigError
from .graph import Edge, Node, ScaffoldGraph


@dataclass
class MergeMap:
    mapping: dict[str, str] = field(default_factory=dict)
    merge_threshold: float = 1.0
    backend: str = "exact"

    def canonical(self, label: str) -> str:
        return self.mapping.get(label, label)

    def to_json(self) -> str:
        return (
            json.dumps(
                {
                    "merge_threshold": self.merge_threshold,
                    "backend": self.backend,
                    "mapping": dict(sorted(self.mapping.items())),
                },
                indent=2,
                ensure_ascii=False,
                sort_keys=True,
            )
            + "\n"
        )


def canonical_label(cluster: list[Node]) -> str:
    """Representative label: most provenance, then shortest, then lexical."""
    if not cluster:
        raise ValueError("cluster must be non-empty")
    return min(
        cluster, key=lambda n: (-len(n.provenance), len(n.label), n.label)
    ).label


def align_nodes(
    graph: ScaffoldGraph, similarity, merge_threshold: float
) -> tuple[ScaffoldGraph, MergeMap]:
    """Merge term nodes whose pairwise similarity reaches the threshold.

    Clustering is transitive (single-link): the clusters are exactly the
    connected components of the >=threshold pair graph. Edges are
    rewritten onto canonical labels in document order; duplicates created
    by rewriting merge their provenance.
    """
    if not 0.0 < merge_threshold <= 1.0:
        raise ConfigError(f"merge threshold {merge_threshold} outside (0, 1]")

    term_nodes = [n for n in graph.nodes if n.kind == "term"]
    labels = [n.label for n in term_nodes]
    parent = list(range(len(labels)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if labels:
        matrix = similarity.similarity_matrix(labels, labels)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                if matrix[i][j] >= merge_threshold:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj

    clusters: dict[int, list[Node]] = {}
    for i, node in enumerate(term_nodes):
        clusters.setdefault(find(i), []).append(node)

    merge_map = MergeMap(
        merge_threshold=merge_threshold, backend=similarity.backend
    )
    for members in clusters.values():
        canon = canonical_label(members)
        for node in members:
            merge_map.mapping[node.label] = canon
    for node in graph.nodes:
        if node.kind == "orphan_sentence":
            merge_map.mapping[node.label] = node.label

    aligned = ScaffoldGraph()
    aligned.raw_assertion_count = graph.raw_assertion_count
    aligned.orphan_ids = set(graph.orphan_ids)
    for node in graph.nodes:  # insertion order keeps provenance deterministic
        canon = merge_map.canonical(node.label)
        existing = aligned.node(canon)
        if existing is None:
            aligned._nodes[canon.casefold()] = Node(
                label=canon, kind=node.kind, provenance=list(node.provenance)
            )
        else:
            existing.provenance.extend(node.provenance)
    for edge in graph.edges:
        key = (
            merge_map.canonical(edge.subject_label),
            edge.predicate,
            merge_map.canonical(edge.object_label),
        )
        existing_edge = aligned._edge_index.get(key)
        if existing_edge is None:
            new_edge = Edge(key[0], edge.predicate, key[2], list(edge.provenance), set(edge.flags))
            aligned._edge_index[key] = new_edge
            aligned.edges.append(new_edge)
        else:
            existing_edge.provenance.extend(edge.provenance)
            existing_edge.flags |= edge.flags
    return aligned, merge_map
