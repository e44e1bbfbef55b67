"""Specification markdown: sectioning, query terms and semantic chunking."""

from __future__ import annotations

import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import EmbeddingFailure, EmptyDocument
from .text import STOPWORDS, is_acronym, is_identifier_like, words

MAX_HEADING_LEVEL = 4
DEFAULT_WINDOW_SENTENCES = 3
DEFAULT_BOUNDARY_THRESHOLD = 0.55
DEFAULT_MAX_TERMS = 12

Embedder = Callable[[Sequence[str]], np.ndarray]

_HEADING_RE = re.compile(r"^(#{1,6})[ \t]+(.*?)[ \t#]*$")
_FENCE_RE = re.compile(r"^\s*(```|~~~)")
_NUMBER_PREFIX_RE = re.compile(r"^(\d+(?:\.\d+)*)\.?\s+(.*)$")
_SENTENCE_CUT_RE = re.compile(r"[.?!] +|\n[ \t]*\n\s*")


@dataclass(frozen=True)
class SpecSection:
    id: str
    title: str
    body: str
    order: int
    level: int = 1
    query_terms: tuple[str, ...] = ()
    start_offset: int = 0
    end_offset: int = 0

    @property
    def text(self) -> str:
        return f"{self.title}\n{self.body}" if self.body else self.title


@dataclass(frozen=True)
class SpecDocument:
    source_path: str
    sections: tuple[SpecSection, ...]

    def __len__(self) -> int:
        return len(self.sections)

    def get(self, section_id: str) -> SpecSection:
        for s in self.sections:
            if s.id == section_id:
                return s
        raise KeyError(section_id)


@dataclass(frozen=True)
class DocChunk:
    text: str
    start_offset: int
    end_offset: int
    embedding_key: str | None = None


def _iter_headings(text: str):
    """Yield (level, raw_title, line_start_offset, line_end_offset), skipping fenced code."""
    offset = 0
    in_fence = False
    for line in text.splitlines(keepends=True):
        start = offset
        offset += len(line)
        stripped = line.rstrip("\r\n")
        if _FENCE_RE.match(stripped):
            in_fence = not in_fence
            continue
        if in_fence:
            continue
        m = _HEADING_RE.match(stripped)
        if m and len(m.group(1)) <= MAX_HEADING_LEVEL:
            yield len(m.group(1)), m.group(2).strip(), start, offset


def parse_spec_markdown(text: str, source_path: str = "<memory>", max_terms: int = DEFAULT_MAX_TERMS) -> SpecDocument:
    headings = list(_iter_headings(text))
    if not headings:
        raise EmptyDocument(f"{source_path}: no headings found")

    top = min(h[0] for h in headings)
    counters = [0] * (MAX_HEADING_LEVEL + 1)
    seen: dict[str, int] = {}
    sections: list[SpecSection] = []
    for order, (level, raw, h_start, h_end) in enumerate(headings):
        depth = level - top
        m = _NUMBER_PREFIX_RE.match(raw)
        if m:
            sid, title = m.group(1), m.group(2).strip()
            nums = [int(p) for p in sid.split(".")]
            for i, n in enumerate(nums[: MAX_HEADING_LEVEL + 1]):
                counters[i] = n
            for i in range(len(nums), len(counters)):
                counters[i] = 0
        else:
            title = raw
            counters[depth] += 1
            for i in range(depth + 1, len(counters)):
                counters[i] = 0
            sid = ".".join(str(c) for c in counters[: depth + 1])
        if sid in seen:
            seen[sid] += 1
            sid = f"{sid}-{seen[sid]}"
        else:
            seen[sid] = 1

        end = headings[order + 1][2] if order + 1 < len(headings) else len(text)
        body = text[h_end:end].strip()
        section = SpecSection(
            id=sid, title=title, body=body, order=order, level=level,
            start_offset=h_start, end_offset=end,
        )
        sections.append(replace(section, query_terms=tuple(extract_query_terms(section, max_terms))))
    return SpecDocument(source_path=source_path, sections=tuple(sections))


def load_spec(path: str | Path, max_terms: int = DEFAULT_MAX_TERMS) -> SpecDocument:
    path = Path(path)
    return parse_spec_markdown(path.read_text(encoding="utf-8"), str(path), max_terms)


def render_spec(doc: SpecDocument) -> str:
    """Render back to markdown with explicit numeric heading prefixes."""
    parts = []
    for s in doc.sections:
        parts.append(f"{'#' * s.level} {s.id} {s.title}\n")
        if s.body:
            parts.append(f"\n{s.body}\n")
        parts.append("\n")
    return "".join(parts)


def extract_query_terms(section: SpecSection, max_terms: int = DEFAULT_MAX_TERMS) -> list[str]:
    """Keywords for a section, technical tokens first, then by frequency.

    Technical tokens are ALL-CAPS acronyms, snake/camel identifiers and
    hyphenated terms. Ties go to the earlier first occurrence.
    """
    stats: dict[str, list] = {}  # key -> [form, count, first_pos, technical]
    for pos, tok in enumerate(words(section.text)):
        tok = tok.strip("_-")
        key = tok.lower()
        if len(key) < 2 or key in STOPWORDS or key.isdigit():
            continue
        technical = is_acronym(tok) or is_identifier_like(tok) or "-" in tok
        entry = stats.get(key)
        if entry is None:
            stats[key] = [tok if technical else key, 1, pos, technical]
        else:
            entry[1] += 1
            if technical and not entry[3]:
                entry[0], entry[3] = tok, True
    ranked = sorted(stats.values(), key=lambda e: (not e[3], -e[1], e[2]))
    return [e[0] for e in ranked[:max_terms]]


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Sentence spans that tile ``text`` exactly."""
    if not text:
        return []
    cuts = [m.end() for m in _SENTENCE_CUT_RE.finditer(text) if m.end() < len(text)]
    bounds = [0, *cuts, len(text)]
    spans = [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
    merged: list[tuple[int, int]] = []
    pending_start = None
    for a, b in spans:
        if not text[a:b].strip():
            if merged:
                merged[-1] = (merged[-1][0], b)
            elif pending_start is None:
                pending_start = a
            continue
        if pending_start is not None:
            a, pending_start = pending_start, None
        merged.append((a, b))
    if pending_start is not None:
        merged.append((pending_start, len(text)))
    return merged


def _embed(embed: Embedder, texts: Sequence[str]) -> np.ndarray:
    try:
        vecs = np.asarray(embed(list(texts)), dtype=np.float64)
    except EmbeddingFailure:
        raise
    except Exception as exc:
        raise EmbeddingFailure(str(exc)) from exc
    if vecs.ndim != 2 or vecs.shape[0] != len(texts):
        raise EmbeddingFailure(f"embedder returned shape {vecs.shape} for {len(texts)} texts")
    return vecs


def window_similarities(text: str, embed: Embedder, window_sentences: int = DEFAULT_WINDOW_SENTENCES):
    """Spans plus cosine between the windows left and right of every sentence gap."""
    spans = split_sentences(text)
    n = len(spans)
    if n < 2:
        return spans, np.zeros(0)
    lefts, rights = [], []
    for b in range(1, n):
        lo, hi = max(0, b - window_sentences), min(n, b + window_sentences)
        lefts.append(text[spans[lo][0]: spans[b - 1][1]])
        rights.append(text[spans[b][0]: spans[hi - 1][1]])
    vecs = _embed(embed, lefts + rights)
    left, right = vecs[: n - 1], vecs[n - 1:]
    sims = np.clip(np.einsum("ij,ij->i", left, right), 0.0, 1.0)
    return spans, sims


def semantic_chunk(
    text: str,
    embed: Embedder,
    window_sentences: int = DEFAULT_WINDOW_SENTENCES,
    boundary_threshold: float = DEFAULT_BOUNDARY_THRESHOLD,
) -> list[DocChunk]:
    """Split text at similarity change points between sliding sentence windows.

    Each run of consecutive gaps whose similarity is below the threshold yields
    a single boundary, at the run's minimum.
    """
    if window_sentences < 1:
        raise ValueError("window_sentences must be >= 1")
    if not text:
        return []
    spans, sims = window_similarities(text, embed, window_sentences)
    cut_after: list[int] = []
    run: list[int] = []
    for gap, s in enumerate(sims):
        if s < boundary_threshold:
            run.append(gap)
            continue
        if run:
            cut_after.append(min(run, key=lambda g: (sims[g], g)))
            run = []
    if run:
        cut_after.append(min(run, key=lambda g: (sims[g], g)))

    edges = [0] + [spans[g][1] for g in cut_after] + [len(text)]
    return [
        DocChunk(text=text[a:b], start_offset=a, end_offset=b, embedding_key=f"chunk-{i}")
        for i, (a, b) in enumerate(zip(edges, edges[1:]))
        if b > a
    ]
