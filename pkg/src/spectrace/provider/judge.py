"""Prompt construction and response parsing for the three judgment tasks.

Every prompt carries its inputs as a fenced JSON block so that any backend,
including the offline oracle, sees exactly the same request.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass

from ..errors import ProviderFailure, UnparseableResponse
from .core import ProviderRequest, SemanticProvider

logger = logging.getLogger(__name__)

SYSTEM_PROMPT = (
    "You are an embedded-systems engineer tracing specification requirements "
    "to C/C++ source code. Answer with JSON only."
)
REPROMPT_SUFFIX = "\n\nRespond with JSON only. No prose, no markdown."

STATUSES = ("Implemented", "Partially_Implemented", "Not_Implemented", "Not_Applicable")

_INSTRUCTIONS = {
    "relevance": (
        "Rate how relevant each candidate {unit} is to the specification section "
        "below, as a score in [0, 1] together with your confidence in [0, 1]. "
        'Return a JSON array: [{{"id": ..., "score": ..., "confidence": ..., '
        '"rationale": ...}}], one object per candidate, ids copied verbatim.'
    ),
    "describe": (
        "Write a one-line description of the purpose and functionality of each "
        "{unit} below, using the supplied names and excerpts. Return a JSON array: "
        '[{{"id": ..., "description": ...}}].'
    ),
    "validate": (
        "Validate the candidate code symbols for the specification section below. "
        "Keep only symbols that implement the section, give each a confidence in "
        "[0, 1], assign one implementation status from "
        "Implemented | Partially_Implemented | Not_Implemented | Not_Applicable, and "
        "list unimplemented requirements in gap_notes. Earlier sections' results are "
        'given as context. Return a JSON object: {{"symbols": [{{"id": ..., "keep": '
        'true|false, "confidence": ...}}], "status": ..., "confidence": ..., '
        '"gap_notes": ...}}.'
    ),
}


@dataclass(frozen=True)
class RelevanceJudgment:
    candidate_id: str
    score: float
    confidence: float
    rationale: str = ""


def section_payload(section) -> dict:
    return {
        "id": section.id,
        "title": section.title,
        "body": section.body,
        "query_terms": list(section.query_terms),
    }


def build_request(task: str, unit: str, payload: dict, max_output_tokens: int = 2048) -> ProviderRequest:
    payload = {"task": task, **payload}
    user = (
        _INSTRUCTIONS[task].format(unit=unit)
        + "\n\nINPUT:\n```json\n"
        + json.dumps(payload, indent=1, ensure_ascii=False, sort_keys=True)
        + "\n```"
    )
    return ProviderRequest(SYSTEM_PROMPT, user, temperature=0.0, max_output_tokens=max_output_tokens)


_FENCE_RE = re.compile(r"```(?:json|JSON)?\s*(.*?)```", re.DOTALL)


def extract_payload(user_prompt: str) -> dict:
    """Recover the JSON input block from a prompt built by :func:`build_request`."""
    blocks = _FENCE_RE.findall(user_prompt)
    if not blocks:
        raise UnparseableResponse("prompt carries no JSON block")
    return json.loads(blocks[-1])


def parse_json_reply(text: str, expect: type):
    """Find a JSON array/object in a reply that may include prose or fences."""
    candidates = [b for b in _FENCE_RE.findall(text)] + [text]
    open_, close = ("[", "]") if expect is list else ("{", "}")
    for cand in candidates:
        cand = cand.strip()
        try:
            value = json.loads(cand)
            if isinstance(value, expect):
                return value
        except ValueError:
            pass
        start, end = cand.find(open_), cand.rfind(close)
        if start != -1 and end > start:
            try:
                value = json.loads(cand[start: end + 1])
            except ValueError:
                continue
            if isinstance(value, expect):
                return value
    raise UnparseableResponse(f"no JSON {expect.__name__} in reply: {text[:120]!r}")


def _ask(provider: SemanticProvider, request: ProviderRequest, phase: str, expect: type):
    reply = provider.complete(request, phase)
    try:
        return parse_json_reply(reply.text, expect)
    except UnparseableResponse:
        logger.warning("unparseable %s reply; re-prompting once", phase)
    retry = ProviderRequest(request.system_prompt, request.user_prompt + REPROMPT_SUFFIX,
                            request.temperature, request.max_output_tokens)
    reply = provider.complete(retry, phase)
    try:
        return parse_json_reply(reply.text, expect)
    except UnparseableResponse as exc:
        raise ProviderFailure(f"{phase}: {exc}") from exc


def _unit(x, lo=0.0, hi=1.0) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        return 0.0
    if v != v:  # NaN
        return 0.0
    return min(hi, max(lo, v))


def judge_relevance(section, candidates, phase: str, provider: SemanticProvider,
                    unit: str = "item") -> list[RelevanceJudgment]:
    """Score candidates ``[(id, description), ...]`` against a section.

    Output order follows the input; candidates the reply omits score 0.
    """
    if not candidates:
        raise ValueError("judge_relevance needs at least one candidate")
    ids = [c[0] for c in candidates]
    if len(set(ids)) != len(ids):
        raise ValueError("candidate ids must be unique")
    request = build_request("relevance", unit, {
        "stage": phase,
        "section": section_payload(section),
        "candidates": [{"id": cid, "description": desc} for cid, desc in candidates],
    })
    reply = _ask(provider, request, phase, list)
    got: dict[str, RelevanceJudgment] = {}
    known = set(ids)
    for item in reply:
        if not isinstance(item, dict) or "id" not in item:
            continue
        cid = str(item["id"])
        if cid not in known:
            logger.warning("%s: dropping judgment for unknown candidate %r", phase, cid)
            continue
        if cid in got:
            continue
        score = _unit(item.get("score"))
        got[cid] = RelevanceJudgment(cid, score, _unit(item.get("confidence", score)),
                                     str(item.get("rationale", "")))
    return [got.get(cid, RelevanceJudgment(cid, 0.0, 0.0, "not scored")) for cid in ids]


def describe_items(items: list[dict], unit: str, provider: SemanticProvider,
                   phase: str = "structure_gen") -> dict[str, str]:
    """One-line descriptions for ``[{"id", "name", "hints", ...}]`` keyed by id."""
    if not items:
        return {}
    request = build_request("describe", unit, {"unit": unit, "items": items})
    reply = _ask(provider, request, phase, list)
    out: dict[str, str] = {}
    wanted = {it["id"] for it in items}
    for entry in reply:
        if isinstance(entry, dict) and entry.get("id") in wanted:
            out.setdefault(entry["id"], " ".join(str(entry.get("description", "")).split()))
    for it in items:
        out.setdefault(it["id"], "")
    return out


@dataclass(frozen=True)
class ValidationVerdict:
    kept: dict[str, float]  # symbol id -> confidence
    status: str
    confidence: float
    gap_notes: str


def request_validation(section, symbols: list[dict], context: list[dict],
                       provider: SemanticProvider) -> ValidationVerdict:
    request = build_request("validate", "symbol", {
        "section": section_payload(section),
        "symbols": symbols,
        "context": context,
    })
    reply = _ask(provider, request, "validation", dict)
    wanted = {s["id"] for s in symbols}
    kept: dict[str, float] = {}
    for item in reply.get("symbols") or []:
        if not isinstance(item, dict) or item.get("id") not in wanted:
            continue
        if item.get("keep") is True:
            kept[item["id"]] = _unit(item.get("confidence"))
    status = reply.get("status")
    if status not in STATUSES:
        raise ProviderFailure(f"validation: invalid status {status!r}")
    return ValidationVerdict(kept, status, _unit(reply.get("confidence")),
                             str(reply.get("gap_notes") or ""))
