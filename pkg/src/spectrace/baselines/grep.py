"""Keyword search baseline: whole-token grep with rarity-weighted ranges."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..repo import RepoModel

MERGE_GAP_LINES = 5


@dataclass(frozen=True)
class KeywordMatch:
    file: str
    line_start: int
    line_end: int
    snippet: str
    score: float


def _pattern(term: str) -> re.Pattern:
    return re.compile(rf"(?<![A-Za-z0-9_]){re.escape(term)}(?![A-Za-z0-9_])", re.IGNORECASE)


def _merge(hit_lines: list[int], gap: int = MERGE_GAP_LINES) -> list[tuple[int, int]]:
    ranges: list[list[int]] = []
    for ln in sorted(set(hit_lines)):
        if ranges and ln - ranges[-1][1] <= gap:
            ranges[-1][1] = ln
        else:
            ranges.append([ln, ln])
    return [(a, b) for a, b in ranges]


def grep_search(model: RepoModel, terms: list[str], k: int = 10,
                texts: dict[str, str] | None = None) -> list[KeywordMatch]:
    """Top-``k`` line ranges by Σ occurrences × ln(N / df), then path, then line.

    Hits within ``MERGE_GAP_LINES`` lines of each other merge into one range.
    """
    if not terms:
        raise ValueError("grep_search needs at least one term")
    uniq = list(dict.fromkeys(t for t in terms if t.strip()))
    patterns = {t: _pattern(t) for t in uniq}
    n_files = len(model.files)
    per_file: dict[str, list[tuple[int, str, int]]] = {}  # file -> [(line, term, count)]
    df = dict.fromkeys(uniq, 0)
    lines_by_file: dict[str, list[str]] = {}
    for f in model.files:
        text = texts[f] if texts is not None else model.read_text(f)
        lines = text.splitlines()
        hits = []
        seen_terms = set()
        for lineno, line in enumerate(lines, start=1):
            for t, pat in patterns.items():
                c = len(pat.findall(line))
                if c:
                    hits.append((lineno, t, c))
                    seen_terms.add(t)
        if hits:
            per_file[f] = hits
            lines_by_file[f] = lines
            for t in seen_terms:
                df[t] += 1
    idf = {t: (math.log(n_files / df[t]) if df[t] else 0.0) for t in uniq}

    matches = []
    for f, hits in per_file.items():
        lines = lines_by_file[f]
        for a, b in _merge([h[0] for h in hits]):
            score = sum(c * idf[t] for ln, t, c in hits if a <= ln <= b)
            matches.append(KeywordMatch(f, a, b, "\n".join(lines[a - 1: b]), score))
    matches.sort(key=lambda m: (-m.score, m.file, m.line_start))
    return matches[:k]


def file_scores(matches: list[KeywordMatch]) -> dict[str, float]:
    out: dict[str, float] = {}
    for m in matches:
        out[m.file] = out.get(m.file, 0.0) + m.score
    return out
