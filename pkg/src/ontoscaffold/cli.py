"""Command-line entry points tying the pipeline stages together.

Each stage reads the previous stage's file artifact, so runs are
diffable and resumable: extract -> graph.json, align -> aligned graph +
merge map, eval -> sweep.csv (+ charts), stats/export -> reports.
Every error class exits with a stable, documented code.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .align import align_nodes
from .config import RunConfig
from .errors import (
    CassetteMissError,
    ConfigError,
    EmptyDocumentError,
    FormatError,
    InputEncodingError,
    LLMUnavailableError,
    OntoScaffoldError,
    SimilarityUnavailableError,
    TaggerUnavailableError,
)
from .evaluate import (
    GoldSet,
    load_gold,
    load_predictions,
    render_sweep_charts,
    sweep,
)
from .graph import ScaffoldGraph, export_graph
from .pipeline import make_llm_client, run_extract, write_artifacts
from .similarity import make_provider

EXIT_CODES = {
    ConfigError: 2,
    InputEncodingError: 3,
    EmptyDocumentError: 3,
    FormatError: 3,
    LLMUnavailableError: 4,
    CassetteMissError: 5,
    TaggerUnavailableError: 6,
    SimilarityUnavailableError: 7,
}


def exit_code_for(exc: Exception) -> int:
    for cls, code in EXIT_CODES.items():
        if isinstance(exc, cls):
            return code
    return 1


def stage_errors(stage: str):
    """Convert pipeline exceptions into stage-tagged messages + exit codes."""

    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except OntoScaffoldError as exc:
                click.echo(f"{stage}: {exc.__class__.__name__}: {exc}", err=True)
                sys.exit(exit_code_for(exc))

        return wrapper

    return decorator


@click.group()
@click.version_option(version=__version__, prog_name="ontoscaffold")
def main():
    """Build and evaluate ontology scaffold graphs from standards text."""


def _load_config(config_path: str | None) -> RunConfig:
    if config_path:
        return RunConfig.load(config_path)
    return RunConfig().validate()


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--document", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--replay", "replay_cassette", type=click.Path(exists=True), default=None,
              help="Answer LLM calls from this cassette (offline).")
@click.option("--record", "record_cassette", type=click.Path(), default=None,
              help="Call the live endpoint and append responses to this cassette.")
@click.option("--live", is_flag=True, help="Call the live endpoint, record nothing.")
@stage_errors("extract")
def extract(config_path, document, out_dir, replay_cassette, record_cassette, live):
    """Run the full document -> scaffold-graph extraction."""
    config = _load_config(config_path)
    if document:
        config.document = document
    if out_dir:
        config.output_dir = out_dir
    chosen = [m for m, on in
              [("replay", replay_cassette), ("record", record_cassette), ("live", live)]
              if on]
    if len(chosen) != 1:
        raise ConfigError("choose exactly one of --replay, --record, --live")
    backend = chosen[0]
    cassette = replay_cassette or record_cassette
    client = make_llm_client(config, backend, cassette)
    result = run_extract(config, client, cassette_path=cassette)
    paths = write_artifacts(result, config.output_dir)
    stats = result.graph.stats()
    click.echo(
        f"extract: {stats.node_count} nodes, {stats.triple_count} triples, "
        f"{stats.island_count} islands -> {paths['graph']}"
    )


@main.command()
@click.argument("graph_path", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--threshold", type=float, default=None)
@click.option("--backend", type=str, default=None)
@click.option("--out", "out_dir", type=click.Path(), default="out")
@stage_errors("align")
def align(graph_path, config_path, threshold, backend, out_dir):
    """Merge near-duplicate term nodes across sections."""
    config = _load_config(config_path)
    if threshold is not None:
        config.align.merge_threshold = threshold
    if backend is not None:
        config.align.backend = backend
    config.validate()
    graph = ScaffoldGraph.from_json(Path(graph_path).read_text(encoding="utf-8"))
    provider = make_provider(
        config.align.backend,
        endpoint=config.evaluation.embedding_endpoint,
        model=config.evaluation.embedding_model,
        mode=config.evaluation.embedding_mode,
        cache_path=config.evaluation.embedding_cache,
    )
    aligned, merge_map = align_nodes(graph, provider, config.align.merge_threshold)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "graph_aligned.json").write_text(aligned.to_json(), encoding="utf-8")
    (out / "merge_map.json").write_text(merge_map.to_json(), encoding="utf-8")
    merged = sum(1 for k, v in merge_map.mapping.items() if k != v)
    click.echo(
        f"align: merged {merged} labels at threshold "
        f"{config.align.merge_threshold} -> {out / 'graph_aligned.json'}"
    )


@main.command(name="eval")
@click.option("--pred", "pred_path", type=click.Path(exists=True), required=True,
              help="Graph JSON or triples JSONL to score.")
@click.option("--gold", "gold_paths", type=click.Path(exists=True), multiple=True,
              required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--backend", type=str, default=None)
@click.option("--embedding-cache", type=click.Path(), default=None)
@click.option("--embedding-mode", type=str, default=None)
@click.option("--out", "out_dir", type=click.Path(), default="out")
@click.option("--charts", is_flag=True, help="Also render SVG curves per (level, gold).")
@stage_errors("eval")
def eval_cmd(pred_path, gold_paths, config_path, backend, embedding_cache,
             embedding_mode, out_dir, charts):
    """Sweep similarity thresholds and score predictions against gold sets."""
    config = _load_config(config_path)
    if backend is not None:
        config.evaluation.backend = backend
    if embedding_cache is not None:
        config.evaluation.embedding_cache = embedding_cache
    if embedding_mode is not None:
        config.evaluation.embedding_mode = embedding_mode
    config.validate()
    pred = load_predictions(pred_path)
    golds: list[GoldSet] = [load_gold(p) for p in gold_paths]
    provider = make_provider(
        config.evaluation.backend,
        endpoint=config.evaluation.embedding_endpoint,
        model=config.evaluation.embedding_model,
        mode=config.evaluation.embedding_mode,
        cache_path=config.evaluation.embedding_cache,
    )
    result = sweep(pred, golds, provider, taus=config.evaluation.taus)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    csv_path.write_text(result.to_csv(), encoding="utf-8")
    click.echo(f"eval: {len(result.rows)} rows -> {csv_path}")
    if charts:
        for path in render_sweep_charts(result, out):
            click.echo(f"eval: chart -> {path}")


@main.command()
@click.argument("graph_path", type=click.Path(exists=True))
@stage_errors("stats")
def stats(graph_path):
    """Print node/triple/island counts for a graph JSON file."""
    graph = ScaffoldGraph.from_json(Path(graph_path).read_text(encoding="utf-8"))
    click.echo(json.dumps(graph.stats().to_dict(), sort_keys=True))


@main.command()
@click.argument("graph_path", type=click.Path(exists=True))
@click.option("--format", "fmt", type=str, default="dot",
              help="json, dot, or csv.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Output file; stdout when omitted.")
@stage_errors("export")
def export(graph_path, fmt, out_path):
    """Re-serialize a graph as JSON, Graphviz DOT, or CSV triples."""
    graph = ScaffoldGraph.from_json(Path(graph_path).read_text(encoding="utf-8"))
    payload = export_graph(graph, fmt)
    if out_path:
        Path(out_path).write_bytes(payload)
        click.echo(f"export: {fmt} -> {out_path}")
    else:
        sys.stdout.buffer.write(payload)


if __name__ == "__main__":
    main()
