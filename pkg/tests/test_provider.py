import json
from concurrent.futures import ThreadPoolExecutor

import httpx
import pytest
from hypothesis import given, strategies as st

from spectrace.corpus import SpecSection
from spectrace.errors import AuthError, ProviderFailure
from spectrace.provider import (
    EchoBackend,
    HttpBackend,
    OracleBackend,
    ProviderRequest,
    ProviderResponse,
    SemanticProvider,
    TokenLedger,
    TransientBackendError,
    judge_relevance,
    make_provider,
    oracle_judge,
    parse_json_reply,
    read_transcript,
    request_validation,
)
from spectrace.provider.oracle import normative_sentences
from spectrace.text import jaccard, term_set

REQ = ProviderRequest("system", "user")


class Scripted:
    """Backend returning canned replies in order; exceptions are raised."""

    name = "scripted"

    def __init__(self, *replies):
        self.replies = list(replies)
        self.requests = []

    def send(self, request):
        self.requests.append(request)
        r = self.replies.pop(0)
        if isinstance(r, Exception):
            raise r
        return ProviderResponse.estimate(request, r)


def _provider(backend, **kw):
    return SemanticProvider(backend, sleep=lambda s: None, **kw)


def _section(body="", terms=(), title="T", sid="1"):
    return SpecSection(sid, title, body, 0, query_terms=tuple(terms))


# ---- requests, ledger, retries

def test_request_invariants():
    with pytest.raises(ValueError):
        ProviderRequest("", "u")
    with pytest.raises(ValueError):
        ProviderRequest("s", "u", temperature=2.5)


def test_echo_estimates_tokens():
    p = _provider(EchoBackend("OK"))
    r = p.complete(REQ, "validation")
    assert r.text == "OK" and r.estimated
    assert r.prompt_tokens == 2 + 1 and r.completion_tokens == 1


def test_ledger_additivity():
    ledger = TokenLedger()
    for _ in range(3):
        ledger.record("file_discovery", ProviderResponse("", 100, 20))
    assert ledger.total == 360 == ledger.to_dict()["total_tokens"]
    assert ledger.calls() == 3


def test_ledger_rejects_unknown_phase():
    with pytest.raises(ValueError):
        TokenLedger().record("bogus", ProviderResponse("", 1, 1))


def test_ledger_thread_safety():
    ledger = TokenLedger()
    with ThreadPoolExecutor(8) as pool:
        list(pool.map(lambda _: ledger.record("validation", ProviderResponse("", 1, 2)), range(400)))
    assert ledger.total == 1200 and ledger.calls("validation") == 400


def test_retry_then_success():
    delays = []
    backend = Scripted(TransientBackendError("503"), TransientBackendError("503"), "fine")
    p = SemanticProvider(backend, sleep=delays.append)
    assert p.complete(REQ, "validation").text == "fine"
    assert delays == [1.0, 2.0]
    assert p.ledger.calls() == 1


def test_retry_exhaustion():
    backend = Scripted(*[TransientBackendError("x")] * 3)
    with pytest.raises(ProviderFailure):
        _provider(backend).complete(REQ, "validation")
    assert len(backend.requests) == 3


def test_auth_error_not_retried():
    backend = Scripted(AuthError("401"), "never")
    with pytest.raises(AuthError):
        _provider(backend).complete(REQ, "validation")
    assert len(backend.requests) == 1


# ---- HTTP backend

def _http(handler, api_key="k"):
    client = httpx.Client(transport=httpx.MockTransport(handler))
    return HttpBackend("https://llm.example/v1", "m", api_key=api_key, client=client)


def test_http_payload_and_usage():
    seen = {}

    def handler(request):
        seen["url"] = str(request.url)
        seen["auth"] = request.headers.get("authorization")
        seen["body"] = json.loads(request.content)
        return httpx.Response(200, json={"choices": [{"message": {"content": "hi"}}],
                                         "usage": {"prompt_tokens": 7, "completion_tokens": 3}})

    r = _http(handler).send(REQ)
    assert (r.text, r.prompt_tokens, r.completion_tokens, r.estimated) == ("hi", 7, 3, False)
    assert seen["url"] == "https://llm.example/v1/chat/completions"
    assert seen["auth"] == "Bearer k"
    assert seen["body"]["temperature"] == 0.0 and seen["body"]["messages"][1]["content"] == "user"


def test_http_status_mapping():
    for code, exc in ((500, TransientBackendError), (429, TransientBackendError),
                      (401, AuthError), (400, ProviderFailure)):
        backend = _http(lambda req, c=code: httpx.Response(c, text="err"))
        with pytest.raises(exc):
            backend.send(REQ)


def test_http_missing_usage_is_estimated():
    backend = _http(lambda req: httpx.Response(200, json={"choices": [{"message": {"content": "abcd"}}]}))
    r = backend.send(REQ)
    assert r.estimated and r.completion_tokens == 1


def test_http_api_key_from_env(monkeypatch):
    monkeypatch.setenv("SPECTRACE_API_KEY", "envkey")
    b = HttpBackend("https://x", "m", client=httpx.Client(transport=httpx.MockTransport(lambda r: None)))
    assert b.api_key == "envkey"


# ---- parsing and judging

def test_parse_fenced_reply():
    text = 'Sure!\n```json\n[{"id": "a", "score": 0.5}]\n```\nhope that helps'
    assert parse_json_reply(text, list) == [{"id": "a", "score": 0.5}]


def test_parse_bare_reply_with_prose():
    assert parse_json_reply('result: {"status": "Implemented"} done', dict) == {"status": "Implemented"}


def test_judge_single_candidate_oracle():
    js = judge_relevance(_section(terms=["nfc"]), [("a", "nfc")], "file_discovery", make_provider("oracle"))
    assert len(js) == 1 and js[0].score == 1.0


def test_judge_drops_unknown_and_fills_missing(caplog):
    backend = Scripted('[{"id": "a", "score": 0.9, "confidence": 0.8}, {"id": "zzz", "score": 1}]')
    js = judge_relevance(_section(), [("a", "x"), ("b", "y")], "file_discovery", _provider(backend))
    assert [(j.candidate_id, j.score) for j in js] == [("a", 0.9), ("b", 0.0)]
    assert "unknown candidate" in caplog.text


def test_judge_clamps_scores():
    backend = Scripted('[{"id": "a", "score": 3, "confidence": -1}]')
    (j,) = judge_relevance(_section(), [("a", "x")], "file_discovery", _provider(backend))
    assert (j.score, j.confidence) == (1.0, 0.0)


def test_judge_reprompts_once():
    backend = Scripted("no idea", '[{"id": "a", "score": 0.4}]')
    (j,) = judge_relevance(_section(), [("a", "x")], "file_discovery", _provider(backend))
    assert j.score == 0.4
    assert backend.requests[1].user_prompt.endswith("Respond with JSON only. No prose, no markdown.")


def test_judge_gives_up_after_reprompt():
    with pytest.raises(ProviderFailure):
        judge_relevance(_section(), [("a", "x")], "file_discovery", _provider(Scripted("nope", "still no")))


def test_judge_requires_unique_candidates():
    with pytest.raises(ValueError):
        judge_relevance(_section(), [("a", "x"), ("a", "y")], "file_discovery", make_provider("oracle"))


def test_validation_rejects_bad_status():
    backend = Scripted('{"symbols": [], "status": "Maybe", "confidence": 0}')
    with pytest.raises(ProviderFailure):
        request_validation(_section(), [], [], _provider(backend))


# ---- oracle

def test_oracle_disjoint_is_zero():
    js = oracle_judge(_section(terms=["alpha"]), [("a", "beta"), ("b", "gamma")])
    assert all(j.score == 0 for j in js)


def test_oracle_identical_text_scores_one():
    js = oracle_judge(_section(terms=["reset", "core"]), [("a", "core reset"), ("b", "core")])
    assert js[0].score == 1.0


def test_oracle_matches_hand_jaccard(nfc_spec):
    s = nfc_spec.get("1")
    cands = [("src/service", "NFC service layer initialization and interface control"),
             ("src/halimpl", "HAL for the NFCC controller logical connection"),
             ("docs", "release notes")]
    q = term_set(s.query_terms)
    raw = [jaccard(q, term_set(d)) for _, d in cands]
    js = oracle_judge(s, cands)
    assert [j.score for j in js] == pytest.approx([r / max(raw) for r in raw], abs=1e-12)
    assert js[0].score > js[2].score and js[1].score > js[2].score


def test_oracle_is_deterministic_across_providers(nfc_spec, nfc_model):
    from spectrace.provider.judge import build_request, section_payload

    req = build_request("relevance", "folder", {"stage": "folder_discovery",
                                                "section": section_payload(nfc_spec.get("2")),
                                                "candidates": [{"id": f, "description": f} for f in nfc_model.files]})
    assert OracleBackend().send(req) == OracleBackend().send(req)


def test_normative_sentences():
    assert normative_sentences("The DH shall reset. Nice weather. It must retry!") == [
        "The DH shall reset.", "It must retry!"]


@given(st.lists(st.text("abcdefgh ", max_size=20), min_size=1, max_size=6), st.text("abcdefgh ", max_size=30))
def test_oracle_scores_bounded_and_closed(descs, body):
    sec = _section(terms=body.split())
    cands = [(f"c{i}", d) for i, d in enumerate(descs)]
    js = oracle_judge(sec, cands)
    assert [j.candidate_id for j in js] == [c for c, _ in cands]
    assert all(0.0 <= j.score <= 1.0 and j.confidence == j.score for j in js)


# ---- transcripts and replay

def test_record_and_replay(tmp_path, nfc_spec):
    path = tmp_path / "t.jsonl"
    rec = make_provider("oracle", transcript_path=path, record=True)
    cands = [("a", "DH NFCC reset"), ("b", "unrelated")]
    first = judge_relevance(nfc_spec.get("3"), cands, "file_discovery", rec)
    rec.close()
    rows = read_transcript(path)
    assert len(rows) == 1 and rows[0]["phase"] == "file_discovery"
    assert rec.ledger.total == sum(r["response"]["prompt_tokens"] + r["response"]["completion_tokens"] for r in rows)

    rep = make_provider("replay", transcript_path=path)
    assert judge_relevance(nfc_spec.get("3"), cands, "file_discovery", rep) == first
    with pytest.raises(ProviderFailure):
        judge_relevance(nfc_spec.get("4"), cands, "file_discovery", rep)
