"""The ontology scaffold graph: assembly, statistics, and export.

Nodes are normalized term labels (or whole orphan sentences); edges are
directed subject->object assertions carrying their predicate and
provenance. Exact-duplicate assertions merge provenance instead of
repeating, so triple_count measures graph size, not LLM verbosity; the
raw assertion count is kept separately for auditing.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import ConfigError, FormatError
from .inference import OrphanMark
from .normalize import ValidatedTriple, normalize_term


@dataclass
class Node:
    label: str
    kind: str  # "term" | "orphan_sentence"
    provenance: list[str] = field(default_factory=list)


@dataclass
class Edge:
    subject_label: str
    predicate: str
    object_label: str
    provenance: list[dict] = field(default_factory=list)
    flags: set[str] = field(default_factory=set)

    def key(self) -> tuple[str, str, str]:
        return (self.subject_label, self.predicate, self.object_label)


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    triple_count: int
    island_count: int

    def to_dict(self) -> dict:
        return {
            "nodes": self.node_count,
            "triples": self.triple_count,
            "islands": self.island_count,
        }


class ScaffoldGraph:
    def __init__(self):
        self._nodes: dict[str, Node] = {}  # keyed by case-folded label
        self.edges: list[Edge] = []
        self._edge_index: dict[tuple[str, str, str], Edge] = {}
        self.orphan_ids: set[str] = set()
        self.raw_assertion_count = 0

    @property
    def nodes(self) -> list[Node]:
        return list(self._nodes.values())

    def node(self, label: str) -> Node | None:
        return self._nodes.get(label.casefold())

    def _touch_node(self, label: str, kind: str, sentence_id: str) -> Node:
        key = label.casefold()
        node = self._nodes.get(key)
        if node is None:
            node = Node(label=label, kind=kind)
            self._nodes[key] = node
        node.provenance.append(sentence_id)
        return node

    def add_triple(self, t: ValidatedTriple) -> None:
        """Insert endpoints and append the edge, merging exact duplicates."""
        self.raw_assertion_count += 1
        self._touch_node(t.subject, "term", t.sentence_id)
        self._touch_node(t.object, "term", t.sentence_id)
        provenance = {"sentence_id": t.sentence_id, "section_label": t.section_label}
        key = (t.subject, t.predicate, t.object)
        edge = self._edge_index.get(key)
        if edge is None:
            edge = Edge(t.subject, t.predicate, t.object, [provenance], set(t.flags))
            self._edge_index[key] = edge
            self.edges.append(edge)
        else:
            edge.provenance.append(provenance)
            edge.flags |= t.flags

    def insert_orphans(self, orphans: list[OrphanMark]) -> None:
        """Materialize orphan sentences as isolated nodes.

        Call once after all triples are in: an orphan whose normalized
        text already names a node adds nothing.
        """
        for orphan in orphans:
            label = normalize_term(orphan.text)
            if not label:
                continue
            self.orphan_ids.add(orphan.sentence_id)
            if label.casefold() in self._nodes:
                continue
            self._nodes[label.casefold()] = Node(
                label=label, kind="orphan_sentence", provenance=[orphan.sentence_id]
            )

    def island_count(self) -> int:
        """Connected components of the undirected view (union-find)."""
        labels = list(self._nodes)
        index = {label: i for i, label in enumerate(labels)}
        parent = list(range(len(labels)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for edge in self.edges:
            a = find(index[edge.subject_label.casefold()])
            b = find(index[edge.object_label.casefold()])
            if a != b:
                parent[a] = b
        return len({find(i) for i in range(len(labels))})

    def stats(self) -> GraphStats:
        return GraphStats(
            node_count=len(self._nodes),
            triple_count=len(self.edges),
            island_count=self.island_count(),
        )

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        nodes = sorted(self._nodes.values(), key=lambda n: n.label.casefold())
        return {
            "nodes": [
                {"label": n.label, "kind": n.kind, "provenance": n.provenance}
                for n in nodes
            ],
            "edges": [
                {
                    "subject": e.subject_label,
                    "predicate": e.predicate,
                    "object": e.object_label,
                    "provenance": e.provenance,
                    "flags": sorted(e.flags),
                }
                for e in self.edges
            ],
            "orphan_ids": sorted(self.orphan_ids),
            "raw_assertion_count": self.raw_assertion_count,
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted node labels, document-order edges."""
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ScaffoldGraph":
        graph = cls()
        try:
            for n in data["nodes"]:
                graph._nodes[n["label"].casefold()] = Node(
                    label=n["label"], kind=n["kind"], provenance=list(n["provenance"])
                )
            for e in data["edges"]:
                edge = Edge(
                    e["subject"],
                    e["predicate"],
                    e["object"],
                    [dict(p) for p in e["provenance"]],
                    set(e.get("flags", [])),
                )
                graph.edges.append(edge)
                graph._edge_index[edge.key()] = edge
            graph.orphan_ids = set(data.get("orphan_ids", []))
            graph.raw_assertion_count = int(data.get("raw_assertion_count", 0))
        except (KeyError, TypeError, AttributeError) as exc:
            raise FormatError(f"not a scaffold graph document: {exc}") from exc
        for edge in graph.edges:
            for endpoint in (edge.subject_label, edge.object_label):
                if endpoint.casefold() not in graph._nodes:
                    raise FormatError(
                        f"edge endpoint {endpoint!r} has no node entry"
                    )
        return graph

    @classmethod
    def from_json(cls, text: str) -> "ScaffoldGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid graph JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dot(self) -> str:
        def quote(s: str) -> str:
            return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = ["digraph scaffold {"]
        for node in sorted(self._nodes.values(), key=lambda n: n.label.casefold()):
            attrs = " [shape=box, style=dashed]" if node.kind == "orphan_sentence" else ""
            lines.append(f"  {quote(node.label)}{attrs};")
        for edge in self.edges:
            lines.append(
                f"  {quote(edge.subject_label)} -> {quote(edge.object_label)}"
                f" [label={quote(edge.predicate)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        """One row per triple: subject,predicate,object,sentence_id."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["subject", "predicate", "object", "sentence_id"])
        for edge in self.edges:
            first = edge.provenance[0]["sentence_id"] if edge.provenance else ""
            writer.writerow(
                [edge.subject_label, edge.predicate, edge.object_label, first]
            )
        return buf.getvalue()


def export_graph(graph: ScaffoldGraph, fmt: str) -> bytes:
    """Serialize a graph as json, dot, or csv bytes."""
    if fmt == "json":
        return graph.to_json().encode("utf-8")
    if fmt == "dot":
        return graph.to_dot().encode("utf-8")
    if fmt == "csv":
        return graph.to_csv().encode("utf-8")
    raise ConfigError(f"unknown export format {fmt!r}")
