"""LLM clients: live HTTP, deterministic replay, and recording.

The replay cassette is a JSON Lines file of {"fingerprint", "response"}
pairs. The fingerprint hashes everything that shapes a completion
request (model, prompt text, temperature, token budget), so replay fails
loudly with CassetteMissError the moment prompt construction drifts from
what was recorded. That property is what makes the whole extraction
pipeline byte-reproducible offline.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import CassetteMissError, LLMUnavailableError


@dataclass(frozen=True)
class PromptRequest:
    sentence_id: str
    prompt_text: str
    temperature: float
    max_new_tokens: int
    model_name: str

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 1.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 1]")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")


def request_fingerprint(request: PromptRequest) -> str:
    """Stable hash of every request field that influences the response."""
    payload = json.dumps(
        {
            "model": request.model_name,
            "prompt": request.prompt_text,
            "temperature": request.temperature,
            "max_new_tokens": request.max_new_tokens,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_cassette(path: str | Path) -> dict[str, str]:
    """Load a cassette file into a fingerprint -> response map.

    Later lines win on duplicate fingerprints, so re-recording a prompt
    overrides the old response.
    """
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            entries[record["fingerprint"]] = record["response"]
    return entries


class ReplayClient:
    """Offline client answering only from a recorded cassette."""

    backend = "replay"

    def __init__(self, cassette_path: str | Path):
        self.cassette_path = Path(cassette_path)
        self._entries = load_cassette(self.cassette_path)

    def complete(self, request: PromptRequest) -> str:
        fingerprint = request_fingerprint(request)
        try:
            return self._entries[fingerprint]
        except KeyError:
            raise CassetteMissError(fingerprint) from None


class LiveClient:
    """Client for a chat-completions-compatible HTTP endpoint."""

    backend = "live"

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        session=None,
    ):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout
        self._session = session or requests.Session()

    def complete(self, request: PromptRequest) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": request.model_name,
            "messages": [{"role": "user", "content": request.prompt_text}],
            "temperature": request.temperature,
            "max_tokens": request.max_new_tokens,
        }
        try:
            resp = self._session.post(
                self.endpoint, json=body, headers=headers, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
            return payload["choices"][0]["message"]["content"]
        except (requests.RequestException, ValueError, KeyError, IndexError) as exc:
            raise LLMUnavailableError(f"LLM request failed: {exc}") from exc


class RecordingClient:
    """Wraps a live client and appends (fingerprint, response) to a cassette.

    Appends are serialized through a lock so concurrent sentence tasks
    cannot interleave partial lines; fingerprints already on file are not
    rewritten.
    """

    backend = "record"

    def __init__(self, inner: LiveClient, cassette_path: str | Path):
        self.inner = inner
        self.cassette_path = Path(cassette_path)
        self._lock = threading.Lock()
        self._seen: set[str] = set()
        if self.cassette_path.exists():
            self._seen = set(load_cassette(self.cassette_path))

    def complete(self, request: PromptRequest) -> str:
        response = self.inner.complete(request)
        fingerprint = request_fingerprint(request)
        with self._lock:
            if fingerprint not in self._seen:
                with open(self.cassette_path, "a", encoding="utf-8") as fh:
                    fh.write(
                        json.dumps(
                            {"fingerprint": fingerprint, "response": response},
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
                self._seen.add(fingerprint)
        return response


def infer(request: PromptRequest, client) -> str:
    """Run one completion; thin named wrapper over the client contract."""
    return client.complete(request)
