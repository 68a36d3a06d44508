from __future__ import annotations

import pytest

from ontoscaffold.config import RunConfig
from ontoscaffold.errors import ConfigError, LLMUnavailableError
from ontoscaffold.llm import ReplayClient
from ontoscaffold.mining import CandidateSet
from ontoscaffold.pipeline import (
    gate_candidates,
    make_llm_client,
    run_extract,
    write_artifacts,
)


def test_gate_quadrants():
    assert gate_candidates(CandidateSet("s", [], [])) == "skip"
    assert gate_candidates(CandidateSet("s", ["term"], [])) == "orphan"
    assert gate_candidates(CandidateSet("s", [], ["act"])) == "skip"
    assert gate_candidates(CandidateSet("s", ["term"], ["act"])) == "infer"


def test_in_flight_count_does_not_change_output(fixture_doc_path, cassette_path):
    graphs = []
    for workers in (1, 4):
        config = RunConfig(document=str(fixture_doc_path))
        config.llm.max_in_flight = workers
        config.validate()
        result = run_extract(config, ReplayClient(cassette_path))
        graphs.append(result.graph.to_json())
    assert graphs[0] == graphs[1]


def test_all_artifacts_reproducible(
    fixture_doc_path, cassette_path, tmp_path, monkeypatch
):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1735689600")
    config = RunConfig(document=str(fixture_doc_path)).validate()
    contents = []
    for name in ("one", "two"):
        result = run_extract(
            config, ReplayClient(cassette_path), cassette_path=cassette_path
        )
        paths = write_artifacts(result, tmp_path / name)
        contents.append({k: p.read_bytes() for k, p in paths.items()})
    assert contents[0] == contents[1]


def test_orphans_report_reasons(fixture_extract):
    reasons = {o.reason for o in fixture_extract.orphans}
    assert reasons == {"no_verbs", "empty_result", "parse_failure"}
    by_id = {o.sentence_id: o for o in fixture_extract.orphans}
    # orphan list is sorted by document position
    assert list(by_id) == sorted(
        by_id, key=lambda sid: [int(p[1:]) for p in sid.split(":")[1:]]
    )


def test_rejections_logged(fixture_extract):
    assert len(fixture_extract.rejections) == 2
    reasons = sorted(r.reason for r in fixture_extract.rejections)
    assert any("ambiguous" in r for r in reasons)
    assert any("no candidate match" in r for r in reasons)


def test_extract_propagates_llm_unavailable(fixture_doc_path):
    class DownClient:
        backend = "live"

        def complete(self, request):
            raise LLMUnavailableError("endpoint down")

    config = RunConfig(document=str(fixture_doc_path)).validate()
    with pytest.raises(LLMUnavailableError):
        run_extract(config, DownClient())


def test_make_llm_client_validation(fixture_doc_path):
    config = RunConfig(document=str(fixture_doc_path)).validate()
    with pytest.raises(ConfigError):
        make_llm_client(config, "replay", None)
    with pytest.raises(ConfigError):
        make_llm_client(config, "live", None)  # no endpoint configured
    config.llm.endpoint = "http://example.invalid/v1/chat/completions"
    assert make_llm_client(config, "live", None).backend == "live"
    with pytest.raises(ConfigError):
        make_llm_client(config, "record", None)  # record needs a cassette


def test_document_required():
    with pytest.raises(ConfigError):
        run_extract(RunConfig().validate(), client=None)
