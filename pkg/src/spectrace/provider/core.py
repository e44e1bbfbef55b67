"""Provider front end: requests, responses, token ledger, retries, transcripts."""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Protocol

from ..errors import AuthError, ProviderFailure
from ..text import estimate_tokens

logger = logging.getLogger(__name__)

PHASES = ("structure_gen", "folder_discovery", "file_discovery", "symbol_discovery", "validation")


@dataclass(frozen=True)
class ProviderRequest:
    system_prompt: str
    user_prompt: str
    temperature: float = 0.0
    max_output_tokens: int = 2048

    def __post_init__(self):
        if not self.system_prompt or not self.user_prompt:
            raise ValueError("prompts must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")

    @property
    def key(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    estimated: bool = False

    def __post_init__(self):
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be >= 0")

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens

    @classmethod
    def estimate(cls, request: ProviderRequest, text: str) -> "ProviderResponse":
        prompt = estimate_tokens(request.system_prompt) + estimate_tokens(request.user_prompt)
        return cls(text, prompt, estimate_tokens(text), estimated=True)


class TransientBackendError(Exception):
    """Transport failure or 5xx; eligible for retry."""


class Backend(Protocol):
    name: str

    def send(self, request: ProviderRequest) -> ProviderResponse: ...


class TokenLedger:
    """Per-phase token accounting, safe for concurrent use."""

    def __init__(self):
        self._lock = threading.Lock()
        self._prompt = dict.fromkeys(PHASES, 0)
        self._completion = dict.fromkeys(PHASES, 0)
        self._calls = dict.fromkeys(PHASES, 0)
        self.estimated = False

    def record(self, phase: str, response: ProviderResponse) -> None:
        if phase not in self._calls:
            raise ValueError(f"unknown phase {phase!r}")
        with self._lock:
            self._prompt[phase] += response.prompt_tokens
            self._completion[phase] += response.completion_tokens
            self._calls[phase] += 1
            self.estimated = self.estimated or response.estimated

    def tokens(self, phase: str) -> int:
        return self._prompt[phase] + self._completion[phase]

    def calls(self, phase: str | None = None) -> int:
        if phase is None:
            return sum(self._calls.values())
        return self._calls[phase]

    @property
    def total(self) -> int:
        return sum(self.tokens(p) for p in PHASES)

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "tokens_by_phase": {p: self._prompt[p] + self._completion[p] for p in PHASES},
                "prompt_tokens_by_phase": dict(self._prompt),
                "completion_tokens_by_phase": dict(self._completion),
                "calls_by_phase": dict(self._calls),
                "total_tokens": sum(self._prompt.values()) + sum(self._completion.values()),
                "estimated": self.estimated,
            }


class TranscriptWriter:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._fh = self.path.open("a", encoding="utf-8")

    def write(self, phase: str, request: ProviderRequest, response: ProviderResponse) -> None:
        rec = {
            "key": request.key,
            "phase": phase,
            "request": asdict(request),
            "response": asdict(response),
        }
        line = json.dumps(rec, ensure_ascii=False, sort_keys=True)
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()

    def close(self) -> None:
        with self._lock:
            self._fh.close()


def read_transcript(path: str | Path) -> list[dict]:
    with Path(path).open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


class SemanticProvider:
    """Wraps a backend with retries, an in-flight limit, a ledger and a transcript."""

    def __init__(
        self,
        backend: Backend,
        ledger: TokenLedger | None = None,
        transcript: TranscriptWriter | None = None,
        max_in_flight: int = 4,
        attempts: int = 3,
        backoff_base: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.backend = backend
        self.ledger = ledger if ledger is not None else TokenLedger()
        self.transcript = transcript
        self.attempts = attempts
        self.backoff_base = backoff_base
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._log_lock = threading.Lock()
        self.call_log: list[tuple[str, int, int]] = []

    @property
    def name(self) -> str:
        return self.backend.name

    def complete(self, request: ProviderRequest, phase: str) -> ProviderResponse:
        last: Exception | None = None
        for attempt in range(self.attempts):
            try:
                with self._slots:
                    response = self.backend.send(request)
                break
            except AuthError:
                raise
            except TransientBackendError as exc:
                last = exc
                if attempt + 1 < self.attempts:
                    delay = self.backoff_base * 2 ** attempt
                    logger.warning("provider call failed (%s); retry %d in %.1fs", exc, attempt + 1, delay)
                    self._sleep(delay)
        else:
            raise ProviderFailure(f"{self.backend.name}: giving up after {self.attempts} attempts: {last}")
        self.ledger.record(phase, response)
        with self._log_lock:
            self.call_log.append((phase, response.prompt_tokens, response.completion_tokens))
        if self.transcript is not None:
            self.transcript.write(phase, request, response)
        return response

    def close(self) -> None:
        if self.transcript is not None:
            self.transcript.close()
