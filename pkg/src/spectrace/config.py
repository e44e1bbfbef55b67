"""Run configuration: one JSON document with ``${VAR}`` environment interpolation.

Relative paths are resolved against the directory of the config file.
"""

from __future__ import annotations

import hashlib
import json
import os
import string
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .baselines import HybridWeights
from .errors import ConfigError
from .pipeline import PipelineConfig
from .repo import is_under

PROVIDER_KINDS = ("http", "oracle", "replay")


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "oracle"
    endpoint: str = ""
    model: str = ""
    transcript_path: str | None = None
    record: bool = False
    max_in_flight: int = 4

    def __post_init__(self):
        if self.kind not in PROVIDER_KINDS:
            raise ConfigError(f"provider.kind must be one of {', '.join(PROVIDER_KINDS)}")
        if self.kind == "replay" and not self.transcript_path:
            raise ConfigError("provider.transcript_path is required for the replay provider")
        if self.kind == "http" and not (self.endpoint and self.model):
            raise ConfigError("provider.endpoint and provider.model are required for the http provider")
        if self.max_in_flight < 1:
            raise ConfigError("provider.max_in_flight must be >= 1")


@dataclass(frozen=True)
class BaselineConfig:
    weights: HybridWeights = field(default_factory=HybridWeights)
    grep_k: int = 10
    embedder: str = "hash:1024:0"
    window_sentences: int = 3
    boundary_threshold: float = 0.55

    def to_dict(self) -> dict:
        return {"weights": self.weights.to_dict(), "grep_k": self.grep_k, "embedder": self.embedder,
                "window_sentences": self.window_sentences, "boundary_threshold": self.boundary_threshold}


@dataclass(frozen=True)
class RunConfig:
    repo_root: str
    output_dir: str
    spec_path: str | None = None
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    baseline: BaselineConfig = field(default_factory=BaselineConfig)
    tags_source: str | None = None
    worker_limit: int = 4

    def to_dict(self) -> dict:
        """Effective configuration with every default materialized."""
        return {
            "repo_root": self.repo_root,
            "spec_path": self.spec_path,
            "output_dir": self.output_dir,
            "provider": asdict(self.provider),
            "pipeline": self.pipeline.to_dict(),
            "baseline": self.baseline.to_dict(),
            "tags_source": self.tags_source,
            "worker_limit": self.worker_limit,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:8]

    def validate_paths(self, need_spec: bool = False) -> None:
        root = Path(self.repo_root)
        if not root.is_dir():
            raise ConfigError(f"repo_root does not exist: {self.repo_root}")
        if need_spec and (not self.spec_path or not Path(self.spec_path).is_file()):
            raise ConfigError(f"spec_path does not exist: {self.spec_path}")
        if self.tags_source and not Path(self.tags_source).is_file():
            raise ConfigError(f"tags_source does not exist: {self.tags_source}")
        out = Path(self.output_dir).resolve()
        if is_under(out.as_posix(), root.resolve().as_posix()):
            raise ConfigError("output_dir must not be inside repo_root")


def _interpolate(value, env):
    if isinstance(value, str):
        try:
            return string.Template(value).substitute(env)
        except KeyError as exc:
            raise ConfigError(f"undefined environment variable {exc.args[0]} in config") from None
        except ValueError as exc:
            raise ConfigError(f"bad ${{...}} placeholder in config: {exc}") from None
    if isinstance(value, list):
        return [_interpolate(v, env) for v in value]
    if isinstance(value, dict):
        return {k: _interpolate(v, env) for k, v in value.items()}
    return value


def _build(cls, data: dict | None, section: str):
    data = dict(data or {})
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from None


def _resolve(base: Path, p: str | None) -> str | None:
    if p in (None, ""):
        return None
    path = Path(p).expanduser()
    return str(path if path.is_absolute() else (base / path).resolve())


def config_from_dict(raw: dict, base_dir: str | Path = ".", env=None) -> RunConfig:
    env = os.environ if env is None else env
    raw = _interpolate(raw, env)
    base = Path(base_dir).resolve()
    top_known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - top_known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    if not raw.get("repo_root"):
        raise ConfigError("repo_root is required")

    prov = dict(raw.get("provider") or {})
    if prov.get("transcript_path"):
        prov["transcript_path"] = _resolve(base, prov["transcript_path"])
    base_raw = dict(raw.get("baseline") or {})
    weights = _build(HybridWeights, base_raw.pop("weights", None), "baseline.weights")
    worker_limit = raw.get("worker_limit", 4)
    if not isinstance(worker_limit, int) or worker_limit < 1:
        raise ConfigError("worker_limit must be an integer >= 1")
    return RunConfig(
        repo_root=_resolve(base, raw["repo_root"]),
        output_dir=_resolve(base, raw.get("output_dir") or "spectrace-out"),
        spec_path=_resolve(base, raw.get("spec_path")),
        provider=_build(ProviderConfig, prov, "provider"),
        pipeline=_build(PipelineConfig, raw.get("pipeline"), "pipeline"),
        baseline=replace(_build(BaselineConfig, base_raw, "baseline"), weights=weights),
        tags_source=_resolve(base, raw.get("tags_source")),
        worker_limit=worker_limit,
    )


def load_config(path: str | Path, env=None) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config_from_dict(raw, path.parent, env)
