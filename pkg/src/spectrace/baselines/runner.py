"""Run the baselines over a whole spec and express results as section traces."""

from __future__ import annotations

import time
from collections.abc import Mapping, Sequence

import numpy as np

from ..corpus import DocChunk, SpecDocument, SpecSection, semantic_chunk
from ..pipeline import PipelineRun, SectionTrace
from ..provider import TokenLedger
from ..repo import CodeSymbol, RepoModel, is_proper_ancestor, is_under, parent_folder
from .grep import KeywordMatch, file_scores, grep_search
from .hybrid import Embedder, HybridIndex, HybridWeights, hybrid_search


def collapse_folders(files: Sequence[str]) -> list[str]:
    """Parent folders of ``files`` with nested ones folded into their ancestors."""
    parents = sorted({parent_folder(f) for f in files})
    return [p for p in parents if not any(is_proper_ancestor(q, p) for q in parents)]


def _is_keyword(results) -> bool:
    return bool(results) and isinstance(results[0], KeywordMatch)


def baseline_to_trace(results, section: SpecSection | str, model: RepoModel | None = None) -> SectionTrace:
    """Project grep matches or hybrid hits onto the pipeline's trace shape.

    Grep symbols are the model's symbols overlapping a matched range (needs
    ``model``). Baselines assert everything they find, so the status is
    Implemented whenever at least one symbol was found.
    """
    sid = section if isinstance(section, str) else section.id
    if not results:
        return SectionTrace(sid, status="Not_Implemented")

    if _is_keyword(results):
        per_file = file_scores(results)
        sym_scores: dict[CodeSymbol, float] = {}
        if model is not None:
            for m in results:
                for s in model.symbol_by_file.get(m.file, []):
                    if s.declaration or s.line_end < m.line_start or s.line_start > m.line_end:
                        continue
                    sym_scores[s] = max(sym_scores.get(s, 0.0), m.score)
    else:
        sym_scores = {}
        for s, score in results:
            sym_scores[s] = max(sym_scores.get(s, float("-inf")), score)
        per_file = {}
        for s, score in sym_scores.items():
            per_file[s.file] = max(per_file.get(s.file, float("-inf")), score)

    files = sorted(per_file.items(), key=lambda p: (-p[1], p[0]))
    folder_best: dict[str, float] = {}
    folders = collapse_folders(per_file)
    for f, score in per_file.items():
        for d in folders:
            if is_under(f, d):
                folder_best[d] = max(folder_best.get(d, float("-inf")), score)
    symbols = sorted(sym_scores.items(), key=lambda p: (-p[1], p[0].id))
    return SectionTrace(
        section_id=sid,
        folders=tuple(sorted(folder_best.items(), key=lambda p: (-p[1], p[0]))),
        files=tuple(files),
        symbols=tuple(symbols),
        validated_symbols=tuple((s, None) for s, _ in symbols),
        status="Implemented" if symbols else "Not_Implemented",
    )


def run_grep(spec: SpecDocument, model: RepoModel, k: int = 10) -> PipelineRun:
    start = time.perf_counter()
    texts = {f: model.read_text(f) for f in model.files}
    traces = []
    for section in spec.sections:
        terms = list(section.query_terms)
        matches = grep_search(model, terms, k, texts=texts) if terms else []
        traces.append(baseline_to_trace(matches, section, model))
    return PipelineRun(traces, time.perf_counter() - start, TokenLedger().to_dict())


def section_chunks(section: SpecSection, embed: Embedder, window_sentences: int = 3,
                   boundary_threshold: float = 0.55) -> list[DocChunk]:
    """Semantic chunks of one section's text, keyed ``<section id>/chunk-<i>``."""
    chunks = semantic_chunk(section.text, embed, window_sentences, boundary_threshold)
    return [DocChunk(c.text, c.start_offset, c.end_offset, f"{section.id}/{c.embedding_key}") for c in chunks]


def search_section(section: SpecSection, index: HybridIndex, embed: Embedder,
                   weights: HybridWeights | None = None, window_sentences: int = 3,
                   boundary_threshold: float = 0.55) -> list[tuple[CodeSymbol, float]]:
    """Best hybrid score per symbol over all of the section's chunks, capped at final_k."""
    weights = weights or HybridWeights()
    chunks = section_chunks(section, embed, window_sentences, boundary_threshold)
    if not chunks:
        return []
    vecs: Mapping[str, np.ndarray] = dict(zip((c.embedding_key for c in chunks), embed([c.text for c in chunks])))
    best: dict[CodeSymbol, float] = {}
    for c in chunks:
        for s, score in hybrid_search(c, index, weights, vectors=vecs):
            if score > best.get(s, float("-inf")):
                best[s] = score
    return sorted(best.items(), key=lambda p: (-p[1], p[0].id))[: weights.final_k]


def run_hybrid(spec: SpecDocument, model: RepoModel, index: HybridIndex, embed: Embedder,
               weights: HybridWeights | None = None, window_sentences: int = 3,
               boundary_threshold: float = 0.55) -> PipelineRun:
    start = time.perf_counter()
    traces = [
        baseline_to_trace(search_section(s, index, embed, weights, window_sentences, boundary_threshold), s, model)
        for s in spec.sections
    ]
    return PipelineRun(traces, time.perf_counter() - start, TokenLedger().to_dict())
