"""Precision/recall/F1 evaluation under a similarity-threshold sweep.

Predictions (a scaffold graph or a plain triples file, e.g. converted
OpenIE output) are scored against a gold reference at two levels: node
labels and whole triples rendered as "subject predicate object" strings.
A predicted item counts as matched when greedy one-to-one alignment
pairs it with a gold item at similarity >= tau; the sweep repeats this
across a tau grid and reports each cell as one row.

Greedy order is descending similarity with (pred index, gold index)
tie-breaking. Because the candidate order never depends on tau, raising
tau can only truncate the accepted set: matched counts, precision, and
recall are non-increasing in tau.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, FormatError
from .graph import ScaffoldGraph
from .normalize import RawTriple

DEFAULT_TAUS = [round(0.10 + 0.05 * i, 2) for i in range(17)]  # 0.10 .. 0.90

CSV_HEADER = [
    "level", "gold", "tau", "precision", "recall", "f1",
    "matched", "pred_count", "gold_count",
]


@dataclass
class GoldSet:
    name: str
    triples: list[RawTriple] = field(default_factory=list)
    extra_nodes: list[str] = field(default_factory=list)

    def node_labels(self) -> list[str]:
        """Endpoint labels plus isolated extra nodes, first-seen order."""
        seen: dict[str, None] = {}
        for t in self.triples:
            seen.setdefault(t.subject)
            seen.setdefault(t.object)
        for label in self.extra_nodes:
            seen.setdefault(label)
        return list(seen)

    def triple_strings(self) -> list[str]:
        return [triple_string(t) for t in self.triples]


@dataclass
class PredictionSet:
    """Items to score, from either a graph or a bare triple list."""

    node_labels: list[str]
    triple_strings: list[str]

    @classmethod
    def from_graph(cls, graph: ScaffoldGraph) -> "PredictionSet":
        return cls(
            node_labels=[n.label for n in graph.nodes],
            triple_strings=[
                triple_string(
                    RawTriple(e.subject_label, e.predicate, e.object_label)
                )
                for e in graph.edges
            ],
        )

    @classmethod
    def from_triples(cls, triples: list[RawTriple]) -> "PredictionSet":
        seen: dict[str, None] = {}
        for t in triples:
            seen.setdefault(t.subject)
            seen.setdefault(t.object)
        return cls(
            node_labels=list(seen),
            triple_strings=[triple_string(t) for t in triples],
        )

    def items(self, level: str) -> list[str]:
        if level == "node":
            return self.node_labels
        if level == "triple":
            return self.triple_strings
        raise ConfigError(f"unknown evaluation level {level!r}")


@dataclass(frozen=True)
class SweepRow:
    level: str
    gold_name: str
    tau: float
    precision: float
    recall: float
    f1: float
    matched: int
    pred_count: int
    gold_count: int


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow(
                [
                    r.level, r.gold_name, repr(r.tau),
                    repr(r.precision), repr(r.recall), repr(r.f1),
                    r.matched, r.pred_count, r.gold_count,
                ]
            )
        return buf.getvalue()


def triple_string(t: RawTriple) -> str:
    """Render a triple for similarity: fields joined by single spaces.

    Field contents are preserved verbatim, so the rendering is not
    injective when fields themselves contain spaces; that ambiguity is
    inherent to the string form and accepted.
    """
    return f"{t.subject} {t.predicate} {t.object}".strip()


def greedy_align(
    pred_items: list[str],
    gold_items: list[str],
    provider,
    tau: float,
    matrix: list[list[float]] | None = None,
) -> list[tuple[int, int]]:
    """Greedy one-to-one alignment of pred to gold items.

    Pairs are visited by descending similarity (ties: lower pred index,
    then lower gold index); a pair is taken when both sides are still
    free and its similarity is >= tau. A precomputed similarity matrix
    can be passed when sweeping multiple taus.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau {tau} outside (0, 1]")
    if matrix is None:
        matrix = provider.similarity_matrix(pred_items, gold_items)
    candidates = [
        (matrix[i][j], i, j)
        for i in range(len(pred_items))
        for j in range(len(gold_items))
        if matrix[i][j] >= tau
    ]
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matches: list[tuple[int, int]] = []
    for _, i, j in candidates:
        if i in used_pred or j in used_gold:
            continue
        used_pred.add(i)
        used_gold.add(j)
        matches.append((i, j))
    matches.sort()
    return matches


def _prf(matched: int, pred_count: int, gold_count: int) -> tuple[float, float, float]:
    precision = matched / pred_count if pred_count else 0.0
    recall = matched / gold_count if gold_count else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return precision, recall, f1


def evaluate_level(
    pred: PredictionSet,
    gold: GoldSet,
    level: str,
    provider,
    tau: float,
    matrix: list[list[float]] | None = None,
) -> SweepRow:
    pred_items = pred.items(level)
    gold_items = gold.node_labels() if level == "node" else gold.triple_strings()
    matched = len(greedy_align(pred_items, gold_items, provider, tau, matrix=matrix))
    precision, recall, f1 = _prf(matched, len(pred_items), len(gold_items))
    return SweepRow(
        level=level,
        gold_name=gold.name,
        tau=tau,
        precision=precision,
        recall=recall,
        f1=f1,
        matched=matched,
        pred_count=len(pred_items),
        gold_count=len(gold_items),
    )


def sweep(
    pred: PredictionSet,
    golds: list[GoldSet],
    provider,
    taus: list[float] | None = None,
) -> SweepResult:
    """Evaluate every (level, gold, tau) cell.

    The pairwise similarity matrix is computed once per (level, gold)
    and shared across the tau grid.
    """
    if taus is None:
        taus = DEFAULT_TAUS
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ConfigError("taus must be strictly increasing")
    result = SweepResult()
    for level in ("node", "triple"):
        for gold in golds:
            pred_items = pred.items(level)
            gold_items = (
                gold.node_labels() if level == "node" else gold.triple_strings()
            )
            matrix = provider.similarity_matrix(pred_items, gold_items)
            for tau in taus:
                result.rows.append(
                    evaluate_level(pred, gold, level, provider, tau, matrix=matrix)
                )
    return result


# -- file formats ----------------------------------------------------------

def _triple_from_record(record: dict, line: int | None = None) -> RawTriple:
    values = []
    for key in ("subject", "predicate", "object"):
        value = record.get(key)
        if not isinstance(value, str) or not value.strip():
            raise FormatError(
                f"field {key!r} missing or not a non-empty string", line=line
            )
        values.append(value.strip())
    return RawTriple(*values)


def load_triples(path: str | Path) -> list[RawTriple]:
    """Load a triples JSONL file: one triple object per line."""
    triples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}", line=lineno) from exc
            if not isinstance(record, dict):
                raise FormatError("line is not a JSON object", line=lineno)
            triples.append(_triple_from_record(record, line=lineno))
    return triples


def load_gold(path: str | Path) -> GoldSet:
    """Load a gold JSON file: {"name", "triples": [...], "extra_nodes": [...]}."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid gold JSON: {exc}") from exc
    if not isinstance(data, dict) or "name" not in data:
        raise FormatError("gold file must be an object with a 'name' field")
    triples = [_triple_from_record(t) for t in data.get("triples", [])]
    extra = data.get("extra_nodes", [])
    if not all(isinstance(x, str) and x.strip() for x in extra):
        raise FormatError("extra_nodes must be non-empty strings")
    return GoldSet(
        name=data["name"],
        triples=triples,
        extra_nodes=[x.strip() for x in extra],
    )


def load_predictions(path: str | Path) -> PredictionSet:
    """Load predictions from graph JSON or triples JSONL, by content."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict) and "nodes" in data and "edges" in data:
        return PredictionSet.from_graph(ScaffoldGraph.from_dict(data))
    return PredictionSet.from_triples(load_triples(path))


def render_sweep_charts(result: SweepResult, out_dir: str | Path) -> list[Path]:
    """Write one SVG line chart (P/R/F1 vs tau) per (level, gold) pair."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ontoscaffold"
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups: dict[tuple[str, str], list[SweepRow]] = {}
    for row in result.rows:
        groups.setdefault((row.level, row.gold_name), []).append(row)

    written = []
    for (level, gold_name), rows in groups.items():
        rows = sorted(rows, key=lambda r: r.tau)
        taus = [r.tau for r in rows]
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(taus, [r.precision for r in rows], marker="o", label="precision")
        ax.plot(taus, [r.recall for r in rows], marker="s", label="recall")
        ax.plot(taus, [r.f1 for r in rows], marker="^", label="f1")
        ax.set_xlabel("similarity threshold")
        ax.set_ylabel("score")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title(f"{level} level vs {gold_name}")
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"sweep_{level}_{gold_name}.svg"
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written
