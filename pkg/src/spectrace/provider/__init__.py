from .backends import API_KEY_ENV, EchoBackend, HttpBackend, ReplayBackend
from .core import (
    PHASES,
    ProviderRequest,
    ProviderResponse,
    SemanticProvider,
    TokenLedger,
    TranscriptWriter,
    TransientBackendError,
    read_transcript,
)
from .judge import (
    STATUSES,
    RelevanceJudgment,
    ValidationVerdict,
    describe_items,
    judge_relevance,
    parse_json_reply,
    request_validation,
)
from .oracle import OracleBackend, oracle_judge


def make_provider(kind: str, *, endpoint: str = "", model: str = "", transcript_path=None,
                  record: bool = False, max_in_flight: int = 4, **kw) -> SemanticProvider:
    """Build a provider of kind ``http``, ``oracle`` or ``replay``.

    With ``record`` set, every call is appended to ``transcript_path``.
    """
    if kind == "http":
        backend = HttpBackend(endpoint, model)
    elif kind == "oracle":
        backend = OracleBackend()
    elif kind == "replay":
        if not transcript_path:
            raise ValueError("replay provider needs a transcript_path")
        backend = ReplayBackend(transcript_path)
        record = False
    else:
        raise ValueError(f"unknown provider kind {kind!r}")
    writer = TranscriptWriter(transcript_path) if record and transcript_path else None
    return SemanticProvider(backend, transcript=writer, max_in_flight=max_in_flight, **kw)
