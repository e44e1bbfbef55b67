"""Run records: everything needed to reproduce and evaluate one run."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .pipeline import SectionTrace

RECORD_VERSION = 1


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def make_run_id(config_hash: str, now: datetime | None = None) -> str:
    now = now or datetime.now(timezone.utc)
    return f"{now.strftime('%Y%m%dT%H%M%S')}{now.microsecond // 1000:03d}Z-{config_hash}"


def traces_json(traces: list[SectionTrace]) -> str:
    """Canonical serialization; identical traces give identical bytes."""
    return json.dumps([t.to_dict() for t in traces], sort_keys=True, indent=1, ensure_ascii=False) + "\n"


@dataclass
class RunRecord:
    run_id: str
    method: str
    config: dict
    traces: list[SectionTrace]
    ledger: dict
    runtime_seconds: float
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    @property
    def uses_provider(self) -> bool:
        return self.method == "hierarchical"

    def to_dict(self) -> dict:
        return {
            "record_version": RECORD_VERSION,
            "run_id": self.run_id,
            "method": self.method,
            "tool_version": self.tool_version,
            "config": self.config,
            "runtime_seconds": self.runtime_seconds,
            "ledger": self.ledger,
            "extra": self.extra,
            "traces": [t.to_dict() for t in self.traces],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(
            run_id=d["run_id"], method=d["method"], config=d["config"],
            traces=[SectionTrace.from_dict(t) for t in d["traces"]],
            ledger=d["ledger"], runtime_seconds=d["runtime_seconds"],
            tool_version=d.get("tool_version", ""), extra=d.get("extra", {}),
        )

    def save(self, path: str | Path) -> Path:
        return atomic_write_text(path, json.dumps(self.to_dict(), indent=1, sort_keys=True, ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "RunRecord":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
