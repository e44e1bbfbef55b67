"""Hierarchical section -> folders -> files -> symbols -> validated status mapping."""

from __future__ import annotations

import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import PurePosixPath

from .corpus import SpecDocument, SpecSection
from .errors import ProviderFailure, UnparseableResponse
from .provider import STATUSES, SemanticProvider, judge_relevance, request_validation
from .repo import CodeSymbol, RepoModel, StructureDocs, is_proper_ancestor, is_under
from .repo.structure import StructureDoc
from .text import estimate_tokens

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    theta1: float = 0.5
    theta2: float = 0.5
    theta3: float = 0.5
    folder_chunk_budget: int = 8000
    refinement_max_folders: int = 6
    max_files_per_section: int = 20
    context_window_sections: int = 3
    context_top_symbols: int = 5

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be within [0, 1]")
        for name in ("folder_chunk_budget", "refinement_max_folders", "max_files_per_section",
                     "context_window_sections", "context_top_symbols"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SectionTrace:
    section_id: str
    folders: tuple[tuple[str, float], ...] = ()
    files: tuple[tuple[str, float], ...] = ()
    symbols: tuple[tuple[CodeSymbol, float], ...] = ()
    validated_symbols: tuple[tuple[CodeSymbol, float], ...] = ()  # (symbol, confidence)
    status: str | None = None
    confidence: float | None = None
    gap_notes: str = ""
    error: str | None = None

    @property
    def folder_paths(self) -> list[str]:
        return [p for p, _ in self.folders]

    @property
    def file_paths(self) -> list[str]:
        return [p for p, _ in self.files]

    @property
    def symbol_list(self) -> list[CodeSymbol]:
        return [s for s, _ in self.symbols]

    @property
    def validated_list(self) -> list[CodeSymbol]:
        return [s for s, _ in self.validated_symbols]

    def to_dict(self) -> dict:
        return {
            "section_id": self.section_id,
            "folders": [{"path": p, "score": s} for p, s in self.folders],
            "files": [{"path": p, "score": s} for p, s in self.files],
            "symbols": [{**sym.to_dict(), "score": s} for sym, s in self.symbols],
            "validated_symbols": [{**sym.to_dict(), "confidence": c} for sym, c in self.validated_symbols],
            "status": self.status,
            "confidence": self.confidence,
            "gap_notes": self.gap_notes,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SectionTrace":
        def sym(x):
            return CodeSymbol.from_dict(x)
        return cls(
            section_id=d["section_id"],
            folders=tuple((f["path"], f["score"]) for f in d.get("folders", [])),
            files=tuple((f["path"], f["score"]) for f in d.get("files", [])),
            symbols=tuple((sym(x), x["score"]) for x in d.get("symbols", [])),
            validated_symbols=tuple((sym(x), x["confidence"]) for x in d.get("validated_symbols", [])),
            status=d.get("status"),
            confidence=d.get("confidence"),
            gap_notes=d.get("gap_notes", ""),
            error=d.get("error"),
        )


@dataclass
class ValidationContext:
    """Rolling summary of the most recently validated sections."""

    size: int = 3
    top_symbols: int = 5
    entries: deque = field(default_factory=deque)

    def push(self, trace: SectionTrace) -> None:
        self.entries.append({
            "section_id": trace.section_id,
            "status": trace.status,
            "top_symbols": [s.name for s in trace.validated_list[: self.top_symbols]],
        })
        while len(self.entries) > self.size:
            self.entries.popleft()

    def snapshot(self) -> list[dict]:
        return list(self.entries)


def _ranked(pairs):
    return sorted(pairs, key=lambda p: (-p[1], p[0]))


def filter_parent_child(folders):
    """Drop every folder that is a proper ancestor of another selected folder."""
    paths = [p for p, _ in folders]
    return [(p, s) for p, s in folders if not any(is_proper_ancestor(p, q) for q in paths)]


def chunk_entries(entries: list[tuple[str, str]], budget: int) -> list[list[tuple[str, str]]]:
    """Pack doc entries into chunks of at most ``budget`` estimated tokens."""
    chunks: list[list[tuple[str, str]]] = []
    cur: list[tuple[str, str]] = []
    used = 0
    for label, desc in entries:
        cost = estimate_tokens(f"- `{label}`: {desc}\n")
        if cur and used + cost > budget:
            chunks.append(cur)
            cur, used = [], 0
        cur.append((label, desc))
        used += cost
    if cur:
        chunks.append(cur)
    return chunks


def discover_folders(section: SpecSection, repo_doc: StructureDoc, provider: SemanticProvider,
                     config: PipelineConfig, max_workers: int = 4) -> list[tuple[str, float]]:
    entries = [("" if label == "." else label, desc) for label, desc in repo_doc.entries()]
    if not entries:
        return []
    if estimate_tokens(repo_doc.content) > config.folder_chunk_budget:
        chunks = chunk_entries(entries, config.folder_chunk_budget)
    else:
        chunks = [entries]

    def judge(chunk):
        cands = [(path or ".", f"{path or '.'}: {desc}") for path, desc in chunk]
        return judge_relevance(section, cands, "folder_discovery", provider, unit="folder")

    if len(chunks) == 1:
        judged = [judge(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=max(1, min(max_workers, len(chunks)))) as pool:
            judged = list(pool.map(judge, chunks))
    scores = {}
    for batch in judged:
        for j in batch:
            scores[j.candidate_id] = max(scores.get(j.candidate_id, 0.0), j.score)
    kept = [("" if cid == "." else cid, s) for cid, s in scores.items() if s > config.theta1]
    kept = _ranked(filter_parent_child(kept))
    if len(kept) > config.refinement_max_folders:
        desc = dict(entries)
        cands = [(p or ".", f"{p or '.'}: {desc.get(p, '')}") for p, _ in kept]
        refined = judge_relevance(section, cands, "folder_discovery", provider, unit="folder")
        kept = _ranked([("" if j.candidate_id == "." else j.candidate_id, j.score) for j in refined])
        kept = kept[: config.refinement_max_folders]
    return kept


def discover_files(section: SpecSection, folders, docs: StructureDocs, provider: SemanticProvider,
                   config: PipelineConfig) -> list[tuple[str, float]]:
    roots = [p for p, _ in folders]
    files = [f for f in docs.model.files if any(is_under(f, r) for r in roots)]
    if not files:
        return []
    descriptions: dict[str, str] = {}
    for folder in sorted({f.rsplit("/", 1)[0] if "/" in f else "" for f in files}):
        descriptions.update(docs.folder_descriptions(folder))
    cands = [(f, f"{PurePosixPath(f).name}: {descriptions.get(f, '')}") for f in files]
    judged = judge_relevance(section, cands, "file_discovery", provider, unit="file")
    kept = _ranked([(j.candidate_id, j.score) for j in judged if j.score > config.theta2])
    return kept[: config.max_files_per_section]


def discover_symbols(section: SpecSection, files, docs: StructureDocs, provider: SemanticProvider,
                     config: PipelineConfig) -> list[tuple[CodeSymbol, float]]:
    by_id: dict[str, CodeSymbol] = {}
    cands = []
    for f, _ in files:
        descs = docs.symbol_descriptions(f)
        for sym in docs.file_symbols(f):
            by_id[sym.id] = sym
            cands.append((sym.id, f"{sym.name} ({sym.kind}): {descs.get(sym.id, '')}"))
    if not cands:
        return []
    judged = judge_relevance(section, cands, "symbol_discovery", provider, unit="code symbol")
    kept = sorted(((by_id[j.candidate_id], j.score) for j in judged if j.score > config.theta3),
                  key=lambda p: (-p[1], p[0].id))
    return kept


def validate_mapping(section: SpecSection, symbols, context: ValidationContext,
                     provider: SemanticProvider, docs: StructureDocs | None = None):
    """Returns (validated [(symbol, confidence)], status, confidence, gap_notes)."""
    payload = []
    for sym, score in symbols:
        desc = ""
        if docs is not None:
            desc = docs.symbol_descriptions(sym.file).get(sym.id, "")
        payload.append({"id": sym.id, "name": sym.name, "kind": sym.kind, "file": sym.file,
                        "description": desc, "score": score})
    verdict = request_validation(section, payload, context.snapshot(), provider)
    validated = [(sym, verdict.kept[sym.id]) for sym, _ in symbols if sym.id in verdict.kept]
    status = verdict.status
    if not validated and status in ("Implemented", "Partially_Implemented"):
        logger.warning("section %s: status %s with no validated symbols; using Not_Implemented",
                       section.id, status)
        status = "Not_Implemented"
    return validated, status, verdict.confidence, verdict.gap_notes


@dataclass
class PipelineRun:
    traces: list[SectionTrace]
    runtime_seconds: float
    ledger: dict

    def traces_json(self) -> list[dict]:
        return [t.to_dict() for t in self.traces]


def _discover(section, repo_doc, docs, provider, config) -> SectionTrace:
    try:
        folders = discover_folders(section, repo_doc, provider, config)
        files = discover_files(section, folders, docs, provider, config)
        symbols = discover_symbols(section, files, docs, provider, config)
    except (ProviderFailure, UnparseableResponse) as exc:
        logger.error("section %s quarantined: %s", section.id, exc)
        return SectionTrace(section.id, error=str(exc))
    return SectionTrace(section.id, tuple(folders), tuple(files), tuple(symbols))


def run_pipeline(spec: SpecDocument, model: RepoModel, provider: SemanticProvider,
                 config: PipelineConfig | None = None, docs: StructureDocs | None = None,
                 workers: int = 4) -> PipelineRun:
    config = config or PipelineConfig()
    docs = docs or StructureDocs(model, provider)
    start = time.perf_counter()
    repo_doc = docs.repository()  # failure here aborts the run

    sections = list(spec.sections)
    if workers <= 1 or len(sections) <= 1:
        discovered = [_discover(s, repo_doc, docs, provider, config) for s in sections]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            discovered = list(pool.map(lambda s: _discover(s, repo_doc, docs, provider, config), sections))

    context = ValidationContext(config.context_window_sections, config.context_top_symbols)
    traces = []
    for section, trace in zip(sections, discovered):
        if trace.error is None:
            try:
                validated, status, conf, notes = validate_mapping(section, trace.symbols, context, provider, docs)
            except (ProviderFailure, UnparseableResponse) as exc:
                logger.error("section %s failed validation: %s", section.id, exc)
                trace = replace(trace, error=str(exc))
            else:
                trace = replace(trace, validated_symbols=tuple(validated), status=status,
                                confidence=conf, gap_notes=notes)
                context.push(trace)
        traces.append(trace)
    return PipelineRun(traces, time.perf_counter() - start, provider.ledger.to_dict())


def check_trace(trace: SectionTrace) -> list[str]:
    """Structural invariant violations of a trace (empty when sound)."""
    problems = []
    sym_ids = {s.id for s in trace.symbol_list}
    files = set(trace.file_paths)
    folders = trace.folder_paths
    for s in trace.validated_list:
        if s.id not in sym_ids:
            problems.append(f"validated symbol {s.name} not among discovered symbols")
    for s in trace.symbol_list:
        if s.file not in files:
            problems.append(f"symbol {s.name} in undiscovered file {s.file}")
    for f in files:
        if not any(is_under(f, d) for d in folders):
            problems.append(f"file {f} outside discovered folders")
    for a in folders:
        for b in folders:
            if is_proper_ancestor(a, b):
                problems.append(f"folder {a!r} is an ancestor of {b!r}")
    if trace.error is None:
        if trace.status not in STATUSES:
            problems.append(f"invalid status {trace.status!r}")
        elif not trace.validated_symbols and trace.status not in ("Not_Implemented", "Not_Applicable"):
            problems.append(f"status {trace.status} with no validated symbols")
    return problems
