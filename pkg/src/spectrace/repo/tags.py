"""Ingest Universal Ctags JSON-lines output (``ctags --output-format=json``)."""

from __future__ import annotations

import json
import re
import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field

from ..errors import MalformedTagLine
from .model import CodeSymbol, RepoModel, normalize_path

logger = logging.getLogger(__name__)

# ctags long and single-letter kind names for the C/C++ parsers
KIND_MAP = {
    "define": "macro", "macro": "macro", "d": "macro",
    "function": "function", "f": "function",
    "prototype": "function", "p": "function",
    "struct": "struct", "s": "struct", "class": "struct", "c": "struct",
    "enum": "enum", "g": "enum",
    "enumerator": "constant", "e": "constant",
    "typedef": "typedef", "t": "typedef",
}
_CONST_RE = re.compile(r"\bconst(expr)?\b")
DROPPED_KINDS = frozenset({"member", "m", "local", "l", "parameter", "z", "label", "L"})


@dataclass
class TagIngestReport:
    symbols: list[CodeSymbol] = field(default_factory=list)
    errors: list[MalformedTagLine] = field(default_factory=list)
    skipped_kinds: Counter = field(default_factory=Counter)
    dropped: int = 0
    unknown_files: int = 0


def _is_const(tag: dict) -> bool:
    return any(isinstance(tag.get(k), str) and _CONST_RE.search(tag[k])
               for k in ("typeref", "pattern", "signature"))


def _is_file_scope(tag: dict) -> bool:
    return not any(k in tag for k in ("scope", "scopeKind", "function"))


def parse_tag_line(line: str, lineno: int) -> dict | None:
    """Decode one line; ``None`` for blank lines and pseudo-tags."""
    line = line.strip()
    if not line:
        return None
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedTagLine(lineno, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise MalformedTagLine(lineno, "not a JSON object")
    if obj.get("_type") == "ptag":
        return None
    missing = [k for k in ("name", "path", "line", "kind") if k not in obj]
    if missing:
        raise MalformedTagLine(lineno, f"missing field(s) {', '.join(missing)}")
    if not isinstance(obj["line"], int) or obj["line"] < 1:
        raise MalformedTagLine(lineno, f"bad line {obj['line']!r}")
    return obj


def map_tag(tag: dict) -> tuple[str | None, bool]:
    """Return (definition-3 kind or None, is_declaration)."""
    kind = str(tag["kind"])
    if kind in ("variable", "v"):
        return ("constant" if _is_const(tag) and _is_file_scope(tag) else None), False
    mapped = KIND_MAP.get(kind)
    return mapped, kind in ("prototype", "p")


def ingest_tags_stream(lines: Iterable[str], model: RepoModel) -> tuple[RepoModel, TagIngestReport]:
    report = TagIngestReport()
    for lineno, raw in enumerate(lines, start=1):
        try:
            tag = parse_tag_line(raw, lineno)
        except MalformedTagLine as err:
            report.errors.append(err)
            continue
        if tag is None:
            continue
        kind_name = str(tag["kind"])
        if kind_name in DROPPED_KINDS:
            report.dropped += 1
            continue
        kind, declaration = map_tag(tag)
        if kind is None:
            report.skipped_kinds[kind_name] += 1
            continue
        path = normalize_path(str(tag["path"]))
        if path not in model:
            report.unknown_files += 1
            continue
        start = tag["line"]
        end = tag.get("end", start)
        if not isinstance(end, int) or end < start:
            end = start
        signature = tag.get("signature") or ""
        if signature and kind == "function":
            signature = f"{tag['name']}{signature}"
        report.symbols.append(CodeSymbol(
            file=path, line_start=start, name=str(tag["name"]), kind=kind,
            line_end=end, signature=signature, declaration=declaration,
        ))
    if report.skipped_kinds:
        logger.warning("skipped %d tag(s) with unmapped kinds: %s",
                       sum(report.skipped_kinds.values()), dict(report.skipped_kinds))
    for err in report.errors:
        logger.warning("%s", err)
    merged = model.symbols + report.symbols
    return model.with_symbols(merged), report
