"""Run configuration: one YAML file, validated, lossless round-trip.

Secrets never live in the file: the LLM API key is read from the
ONTOSCAFFOLD_LLM_API_KEY environment variable (fallback LLM_API_KEY)
at client-build time.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .evaluate import DEFAULT_TAUS
from .inference import InferenceSettings


@dataclass
class TaggerSettings:
    mode: str = "builtin"  # builtin | remote
    endpoint: str | None = None
    fallback_to_builtin: bool = True
    timeout: float = 10.0


@dataclass
class LLMSettings:
    endpoint: str | None = None
    model_name: str = "mistral-7b-instruct"
    temperature: float = 0.2
    retries: int = 3
    token_floor: int = 256
    token_ceiling: int = 1024
    triples_per_term: int = 2
    tokens_per_triple: int = 24
    max_in_flight: int = 4
    timeout: float = 60.0

    def inference_settings(self) -> InferenceSettings:
        return InferenceSettings(
            model_name=self.model_name,
            temperature=self.temperature,
            retries=self.retries,
            token_floor=self.token_floor,
            token_ceiling=self.token_ceiling,
            triples_per_term=self.triples_per_term,
            tokens_per_triple=self.tokens_per_triple,
        )


@dataclass
class AlignSettings:
    merge_threshold: float = 0.85
    backend: str = "char_trigram"  # char_trigram | exact | remote_embedding


@dataclass
class EvalSettings:
    backend: str = "char_trigram"
    taus: list[float] = field(default_factory=lambda: list(DEFAULT_TAUS))
    embedding_endpoint: str | None = None
    embedding_model: str = "default-embedding"
    embedding_mode: str = "live"  # live | replay | record
    embedding_cache: str | None = None


@dataclass
class RunConfig:
    document: str | None = None
    output_dir: str = "out"
    validation_policy: str = "lenient"  # lenient | strict
    tagger: TaggerSettings = field(default_factory=TaggerSettings)
    llm: LLMSettings = field(default_factory=LLMSettings)
    align: AlignSettings = field(default_factory=AlignSettings)
    evaluation: EvalSettings = field(default_factory=EvalSettings)

    def validate(self) -> "RunConfig":
        if self.validation_policy not in ("lenient", "strict"):
            raise ConfigError(f"unknown validation policy {self.validation_policy!r}")
        if self.tagger.mode not in ("builtin", "remote"):
            raise ConfigError(f"unknown tagger mode {self.tagger.mode!r}")
        if self.tagger.mode == "remote" and not self.tagger.endpoint:
            raise ConfigError("tagger.mode=remote requires tagger.endpoint")
        if not 0.0 <= self.llm.temperature <= 1.0:
            raise ConfigError(f"temperature {self.llm.temperature} outside [0, 1]")
        if self.llm.retries < 1:
            raise ConfigError("llm.retries must be at least 1")
        if self.llm.token_floor > self.llm.token_ceiling:
            raise ConfigError(
                f"token floor {self.llm.token_floor} exceeds ceiling "
                f"{self.llm.token_ceiling}"
            )
        if min(self.llm.token_floor, self.llm.triples_per_term,
               self.llm.tokens_per_triple, self.llm.max_in_flight) < 1:
            raise ConfigError("llm numeric settings must be positive")
        if not 0.0 < self.align.merge_threshold <= 1.0:
            raise ConfigError(
                f"merge threshold {self.align.merge_threshold} outside (0, 1]"
            )
        if self.align.backend not in ("char_trigram", "exact", "remote_embedding"):
            raise ConfigError(f"unknown alignment backend {self.align.backend!r}")
        if self.evaluation.backend not in ("char_trigram", "exact", "remote_embedding"):
            raise ConfigError(f"unknown evaluation backend {self.evaluation.backend!r}")
        if self.evaluation.embedding_mode not in ("live", "replay", "record"):
            raise ConfigError(
                f"unknown embedding mode {self.evaluation.embedding_mode!r}"
            )
        taus = self.evaluation.taus
        if not taus or any(b <= a for a, b in zip(taus, taus[1:])):
            raise ConfigError("evaluation.taus must be non-empty, strictly increasing")
        if not all(0.0 < t <= 1.0 for t in taus):
            raise ConfigError("evaluation.taus must lie in (0, 1]")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data or {})
        known = {
            "document", "output_dir", "validation_policy",
            "tagger", "llm", "align", "evaluation",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

        def build(section_cls, key):
            section = data.get(key) or {}
            if not isinstance(section, dict):
                raise ConfigError(f"config section {key!r} must be a mapping")
            try:
                return section_cls(**section)
            except TypeError as exc:
                raise ConfigError(f"bad config section {key!r}: {exc}") from exc

        return cls(
            document=data.get("document"),
            output_dir=data.get("output_dir", "out"),
            validation_policy=data.get("validation_policy", "lenient"),
            tagger=build(TaggerSettings, "tagger"),
            llm=build(LLMSettings, "llm"),
            align=build(AlignSettings, "align"),
            evaluation=build(EvalSettings, "evaluation"),
        ).validate()

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = yaml.safe_load(fh)
            except yaml.YAMLError as exc:
                raise ConfigError(f"invalid config file: {exc}") from exc
        return cls.from_dict(data or {})

    def dump(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(self.to_dict(), fh, sort_keys=True)


def llm_api_key() -> str | None:
    return os.environ.get("ONTOSCAFFOLD_LLM_API_KEY") or os.environ.get("LLM_API_KEY")
