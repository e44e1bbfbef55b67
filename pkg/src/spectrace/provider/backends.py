"""Concrete backends: OpenAI-compatible HTTP, transcript replay, echo."""

from __future__ import annotations

import logging
import os
import threading
from collections import defaultdict
from pathlib import Path

import httpx

from ..errors import AuthError, ProviderFailure
from .core import ProviderRequest, ProviderResponse, TransientBackendError, read_transcript

logger = logging.getLogger(__name__)

API_KEY_ENV = "SPECTRACE_API_KEY"


class HttpBackend:
    """Chat-completions client for any OpenAI-compatible endpoint."""

    name = "http"

    def __init__(self, endpoint: str, model: str, api_key: str | None = None,
                 timeout: float = 120.0, client: httpx.Client | None = None):
        if not endpoint or not model:
            raise ValueError("endpoint and model are required for the http provider")
        self.endpoint = endpoint.rstrip("/")
        if not self.endpoint.endswith("/chat/completions"):
            self.endpoint += "/chat/completions"
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self._client = client or httpx.Client(timeout=timeout)

    def payload(self, request: ProviderRequest) -> dict:
        return {
            "model": self.model,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_prompt},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }

    def send(self, request: ProviderRequest) -> ProviderResponse:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self._client.post(self.endpoint, json=self.payload(request), headers=headers)
        except httpx.TransportError as exc:
            raise TransientBackendError(f"transport error: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"HTTP {resp.status_code} from {self.endpoint}")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientBackendError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise ProviderFailure(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
            text = body["choices"][0]["message"]["content"] or ""
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderFailure(f"malformed chat-completions response: {exc}") from exc
        usage = body.get("usage") or {}
        if "prompt_tokens" in usage and "completion_tokens" in usage:
            return ProviderResponse(text, int(usage["prompt_tokens"]), int(usage["completion_tokens"]))
        return ProviderResponse.estimate(request, text)


class ReplayBackend:
    """Serves responses recorded in a transcript, keyed by request hash.

    Identical requests recorded more than once are served in recorded order;
    once exhausted the last one repeats.
    """

    name = "replay"

    def __init__(self, transcript_path: str | Path):
        self._responses: dict[str, list[ProviderResponse]] = defaultdict(list)
        for rec in read_transcript(transcript_path):
            self._responses[rec["key"]].append(ProviderResponse(**rec["response"]))
        self._cursor: dict[str, int] = defaultdict(int)
        self._lock = threading.Lock()

    def send(self, request: ProviderRequest) -> ProviderResponse:
        queue = self._responses.get(request.key)
        if not queue:
            raise ProviderFailure(f"replay: no recorded response for request {request.key[:12]}")
        with self._lock:
            idx = min(self._cursor[request.key], len(queue) - 1)
            self._cursor[request.key] += 1
        return queue[idx]


class EchoBackend:
    """Returns a fixed text; handy for wiring tests."""

    name = "echo"

    def __init__(self, text: str = "OK"):
        self.text = text

    def send(self, request: ProviderRequest) -> ProviderResponse:
        return ProviderResponse.estimate(request, self.text)
