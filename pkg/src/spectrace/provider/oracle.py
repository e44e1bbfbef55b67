"""Deterministic lexical stand-in for an LLM backend.

The oracle reads the JSON input block of each prompt and answers it with
term-overlap heuristics, so whole pipeline runs are reproducible offline.
"""

from __future__ import annotations

import json
import re

from ..repo.clexer import first_sentence
from ..text import jaccard, split_identifier, term_set
from .core import ProviderRequest, ProviderResponse
from .judge import RelevanceJudgment, extract_payload

NORMATIVE = frozenset({"shall", "must", "required", "requires", "mandatory", "should"})
KEEP_MIN_SHARED = 2
COVER_MIN_SHARED = 2

_SENTENCE_RE = re.compile(r"[^.!?\n]+[.!?]?")


def _terms_of(section) -> list[str]:
    if isinstance(section, dict):
        return list(section.get("query_terms") or [])
    return list(section.query_terms)


def oracle_judge(section, candidates) -> list[RelevanceJudgment]:
    """Jaccard of section query terms vs. description terms, max-normalized."""
    qs = term_set(_terms_of(section))
    raw = []
    for cid, desc in candidates:
        overlap = qs & term_set(desc)
        raw.append((cid, jaccard(qs, term_set(desc)), sorted(overlap)))
    top = max((r[1] for r in raw), default=0.0)
    out = []
    for cid, j, shared in raw:
        score = j / top if top > 0 else 0.0
        out.append(RelevanceJudgment(cid, score, score, "shared: " + ", ".join(shared) if shared else "no shared terms"))
    return out


def oracle_describe(item: dict) -> str:
    hints = [first_sentence(h) for h in item.get("hints") or [] if h and h.strip()]
    if hints:
        return " ".join(hints)
    symbols = item.get("symbols") or []
    if symbols:
        return "Defines " + ", ".join(symbols[:6]) + "."
    words = " ".join(split_identifier(item.get("name", "")))
    return f"{words.capitalize()}." if words else "No description available."


def normative_sentences(body: str) -> list[str]:
    out = []
    for m in _SENTENCE_RE.finditer(body):
        sent = m.group().strip()
        if sent and NORMATIVE & {w.lower() for w in re.findall(r"[A-Za-z]+", sent)}:
            out.append(sent)
    return out


def oracle_validate(payload: dict) -> dict:
    section = payload["section"]
    sec_terms = term_set(section["title"] + " " + section["body"])
    verdicts = []
    kept_terms: set[str] = set()
    confidences = []
    for sym in payload["symbols"]:
        sym_terms = term_set(sym["name"] + " " + sym.get("description", ""))
        shared = sym_terms & sec_terms
        keep = len(shared) >= KEEP_MIN_SHARED
        conf = len(shared) / len(sym_terms) if sym_terms else 0.0
        verdicts.append({"id": sym["id"], "keep": keep, "confidence": round(conf, 6)})
        if keep:
            kept_terms |= sym_terms
            confidences.append(round(conf, 6))

    requirements = normative_sentences(section["body"])
    uncovered = [r for r in requirements if len(term_set(r) & kept_terms) < COVER_MIN_SHARED]
    if not confidences:
        status = "Not_Implemented" if requirements else "Not_Applicable"
    elif not requirements or not uncovered:
        status = "Implemented"
    else:
        status = "Partially_Implemented"
    if status == "Not_Implemented":
        uncovered = requirements
    confidence = round(sum(confidences) / len(confidences), 6) if confidences else 0.0
    return {
        "symbols": verdicts,
        "status": status,
        "confidence": confidence,
        "gap_notes": " | ".join(uncovered),
    }


class OracleBackend:
    name = "oracle"

    def send(self, request: ProviderRequest) -> ProviderResponse:
        payload = extract_payload(request.user_prompt)
        task = payload.get("task")
        if task == "relevance":
            cands = [(c["id"], c["description"]) for c in payload["candidates"]]
            reply = [
                {"id": j.candidate_id, "score": round(j.score, 6),
                 "confidence": round(j.confidence, 6), "rationale": j.rationale}
                for j in oracle_judge(payload["section"], cands)
            ]
        elif task == "describe":
            reply = [{"id": it["id"], "description": oracle_describe(it)} for it in payload["items"]]
        elif task == "validate":
            reply = oracle_validate(payload)
        else:
            raise ValueError(f"oracle: unknown task {task!r}")
        return ProviderResponse.estimate(request, json.dumps(reply, ensure_ascii=False))
