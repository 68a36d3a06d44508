from __future__ import annotations

from pathlib import Path

import pytest

from ontoscaffold.config import RunConfig
from ontoscaffold.ingest import load_document
from ontoscaffold.llm import ReplayClient
from ontoscaffold.pipeline import run_extract

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixture_doc_path() -> Path:
    return FIXTURES / "secepp_short.txt"


@pytest.fixture(scope="session")
def cassette_path() -> Path:
    return FIXTURES / "cassette.jsonl"


@pytest.fixture(scope="session")
def embeddings_path() -> Path:
    return FIXTURES / "embeddings.jsonl"


@pytest.fixture(scope="session")
def mini_gold_path() -> Path:
    return FIXTURES / "mini_gold.json"


@pytest.fixture(scope="session")
def fixture_document(fixture_doc_path):
    return load_document(fixture_doc_path.read_bytes(), doc_id=fixture_doc_path.stem)


@pytest.fixture(scope="session")
def fixture_extract(fixture_doc_path, cassette_path):
    """One replayed end-to-end extraction, shared across tests."""
    config = RunConfig(document=str(fixture_doc_path)).validate()
    client = ReplayClient(cassette_path)
    return run_extract(config, client, cassette_path=cassette_path)
