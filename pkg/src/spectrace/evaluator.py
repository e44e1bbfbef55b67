"""Accuracy, cost and drift metrics against curated ground truth."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingGroundTruth
from .pipeline import SectionTrace
from .provider import STATUSES
from .repo import RepoModel, is_under

logger = logging.getLogger(__name__)

DRIFT_LEVELS = (0.0, 0.3, 0.5, 1.0)
MINOR_DRIFT_MAX_EXTRAS = 2
NA = "N/A"


@dataclass(frozen=True)
class GroundTruthEntry:
    section_id: str
    expected_folders: frozenset[str] = frozenset()
    expected_files: frozenset[str] = frozenset()
    expected_symbols: frozenset[tuple[str, str]] = frozenset()  # (name, kind)
    layers: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruthEntry":
        return cls(
            section_id=str(d["section_id"]),
            expected_folders=frozenset(d.get("expected_folders", [])),
            expected_files=frozenset(d.get("expected_files", [])),
            expected_symbols=frozenset((s["name"], s["kind"]) for s in d.get("expected_symbols", [])),
            layers=dict(d.get("layers", {})),
        )

    def layer_of(self, path: str) -> str | None:
        """Label of the longest ``layers`` key containing ``path`` (keys may be folders or files)."""
        best = None
        for key, label in self.layers.items():
            if is_under(path, key) and (best is None or len(key) > len(best[0])):
                best = (key, label)
        return best[1] if best else None


def load_ground_truth(source: str | Path | Sequence[dict]) -> dict[str, GroundTruthEntry]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            source = json.load(fh)
    out = {}
    for d in source:
        entry = GroundTruthEntry.from_dict(d)
        if entry.section_id in out:
            raise ValueError(f"duplicate ground truth for section {entry.section_id}")
        out[entry.section_id] = entry
    return out


def _ok(traces: Iterable[SectionTrace]) -> list[SectionTrace]:
    return [t for t in traces if t.error is None]


def _entry(gt: Mapping[str, GroundTruthEntry], section_id: str) -> GroundTruthEntry:
    try:
        return gt[section_id]
    except KeyError:
        raise MissingGroundTruth(section_id) from None


def file_existence_accuracy(traces: Sequence[SectionTrace], model: RepoModel | Iterable[str]) -> float:
    """Share of distinct mapped files that exist; 100 when nothing was mapped."""
    existing = set(model.files) if isinstance(model, RepoModel) else set(model)
    mapped = {f for t in _ok(traces) for f in t.file_paths}
    if not mapped:
        return 100.0
    return 100.0 * len(mapped & existing) / len(mapped)


def file_mapping_accuracy(traces: Sequence[SectionTrace], gt: Mapping[str, GroundTruthEntry]) -> float:
    """Macro-averaged per-section recall of expected files."""
    recalls = []
    for t in _ok(traces):
        expected = _entry(gt, t.section_id).expected_files
        if expected:
            recalls.append(len(set(t.file_paths) & expected) / len(expected))
    return 100.0 * sum(recalls) / len(recalls) if recalls else 100.0


def file_mapping_precision(traces: Sequence[SectionTrace], gt: Mapping[str, GroundTruthEntry]) -> float:
    """Supplementary: macro-averaged precision over sections that mapped any file."""
    vals = []
    for t in _ok(traces):
        mapped = set(t.file_paths)
        if mapped:
            vals.append(len(mapped & _entry(gt, t.section_id).expected_files) / len(mapped))
    return 100.0 * sum(vals) / len(vals) if vals else 100.0


def confidence_and_coverage(traces: Sequence[SectionTrace]) -> tuple[float | None, float]:
    """(mean validated-symbol confidence × 100, mean validated symbols per section).

    Confidence is None when no validated symbol carries one (baselines).
    """
    ok = _ok(traces)
    if not ok:
        logger.warning("confidence_and_coverage: no completed sections")
        return 0.0, 0.0
    confs = [c for t in ok for _, c in t.validated_symbols if c is not None]
    has_any = any(t.validated_symbols for t in ok)
    elements = sum(len(t.validated_symbols) for t in ok) / len(ok)
    if not confs:
        return (None if has_any else 0.0), elements
    return 100.0 * sum(confs) / len(confs), elements


def _level_drift(mapped: set, expected: set, layer, expected_layers: set) -> float:
    if mapped == expected:
        return 0.0
    mapped_layers = {layer(m) for m in mapped}
    in_layer = all(layer(m) in expected_layers for m in mapped)
    extras = mapped - expected
    if expected <= mapped and len(extras) <= MINOR_DRIFT_MAX_EXTRAS and in_layer:
        return 0.3
    if in_layer and expected_layers <= mapped_layers:
        return 0.5
    return 1.0


def drift_breakdown(trace: SectionTrace, entry: GroundTruthEntry) -> dict[str, float]:
    lay = entry.layer_of
    folder_layers = {lay(f) for f in entry.expected_folders}
    file_layers = {lay(f) for f in entry.expected_files}
    d_folder = _level_drift(set(trace.folder_paths), set(entry.expected_folders), lay, folder_layers)
    d_file = _level_drift(set(trace.file_paths), set(entry.expected_files), lay, file_layers)

    files_of: dict[tuple[str, str], str] = {}
    for s in trace.validated_list:
        files_of.setdefault((s.name, s.kind), s.file)
    mapped_syms = set(files_of)
    # expected symbols live in expected files; mapped ones take their own file's layer
    d_symbol = _level_drift(mapped_syms, set(entry.expected_symbols),
                            lambda key: lay(files_of[key]) if key in files_of else None,
                            file_layers or folder_layers)
    return {"folder": d_folder, "file": d_file, "symbol": d_symbol,
            "total": round(d_folder + d_file + d_symbol, 10)}


def drift_score(trace: SectionTrace, gt_entry: GroundTruthEntry | Mapping[str, GroundTruthEntry]) -> float:
    if not isinstance(gt_entry, GroundTruthEntry):
        gt_entry = _entry(gt_entry, trace.section_id)
    return drift_breakdown(trace, gt_entry)["total"]


@dataclass
class GapReport:
    groups: dict[str, list[str]]
    details: dict[str, dict]
    markdown: str

    @property
    def gaps(self) -> list[str]:
        return self.groups["Not_Implemented"] + self.groups["Partially_Implemented"]


def gap_report(traces: Sequence[SectionTrace], gt: Mapping[str, GroundTruthEntry] | None = None,
               titles: Mapping[str, str] | None = None) -> GapReport:
    """Group sections by status; errored sections form their own group."""
    titles = titles or {}
    groups: dict[str, list[str]] = {s: [] for s in STATUSES}
    groups["Errored"] = []
    details = {}
    for t in traces:
        key = "Errored" if t.error is not None or t.status not in STATUSES else t.status
        groups[key].append(t.section_id)
        if key in ("Not_Implemented", "Partially_Implemented"):
            missing = []
            if gt is not None and t.section_id in gt:
                missing = sorted(gt[t.section_id].expected_files - set(t.file_paths))
            details[t.section_id] = {"gap_notes": t.gap_notes, "unmapped_expected_files": missing}

    lines = ["# Gap report", "", "| Status | Sections |", "|---|---|"]
    for key, ids in groups.items():
        lines.append(f"| {key} | {len(ids)} |")
    lines.append("")
    for key in ("Not_Implemented", "Partially_Implemented"):
        lines.append(f"## {key}")
        lines.append("")
        if not groups[key]:
            lines.append("_None._")
        for sid in groups[key]:
            d = details[sid]
            head = f"{sid} {titles[sid]}" if sid in titles else sid
            lines.append(f"### {head}")
            notes = [n.strip() for n in d["gap_notes"].split(" | ") if n.strip()]
            for n in notes:
                lines.append(f"- requirement: {n}")
            for f in d["unmapped_expected_files"]:
                lines.append(f"- unmapped expected file: `{f}`")
            if not notes and not d["unmapped_expected_files"]:
                lines.append("- no notes")
        lines.append("")
    if groups["Errored"]:
        lines += ["## Errored", ""] + [f"- {sid}" for sid in groups["Errored"]] + [""]
    return GapReport(groups, details, "\n".join(lines))


@dataclass(frozen=True)
class MethodRun:
    name: str
    traces: Sequence[SectionTrace]
    ledger: Mapping
    runtime_seconds: float
    uses_provider: bool = True


COLUMNS = (
    ("method", "Method"),
    ("confidence_pct", "Confidence (%)"),
    ("elements_per_section", "Elements per Section"),
    ("runtime_minutes", "Runtime (min)"),
    ("tokens_millions", "Tokens (M)"),
    ("file_existence_pct", "File Exist. (%)"),
    ("file_mapping_pct", "File Map. Acc. (%)"),
    ("mean_drift", "Mean Drift"),
    ("file_precision_pct", "File Precision (%, supplementary)"),
    ("errored_sections", "Errored"),
)


@dataclass
class EvalReport:
    rows: list[dict]
    sections: dict[str, list[dict]]

    def to_dict(self) -> dict:
        return {"columns": [k for k, _ in COLUMNS], "rows": self.rows, "sections": self.sections}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_markdown(self) -> str:
        def cell(v):
            if v is None:
                return NA
            if isinstance(v, float):
                return f"{v:.1f}" if abs(v) >= 0.05 or v == 0 else f"{v:.4f}"
            return str(v)

        lines = ["| " + " | ".join(h for _, h in COLUMNS) + " |",
                 "|" + "|".join("---" for _ in COLUMNS) + "|"]
        for r in self.rows:
            lines.append("| " + " | ".join(cell(r[k]) for k, _ in COLUMNS) + " |")
        return "\n".join(lines) + "\n"


def _round(x: float | None, nd: int = 6) -> float | None:
    return None if x is None else round(float(x), nd)


def compare_methods(runs: Sequence[MethodRun], model: RepoModel | Iterable[str],
                    gt: Mapping[str, GroundTruthEntry]) -> EvalReport:
    files = set(model.files) if isinstance(model, RepoModel) else set(model)
    rows, sections = [], {}
    for run in runs:
        ok = _ok(run.traces)
        conf, elements = confidence_and_coverage(run.traces)
        drifts = [drift_breakdown(t, _entry(gt, t.section_id)) for t in ok]
        mean_drift = sum(d["total"] for d in drifts) / len(drifts) if drifts else 0.0
        rows.append({
            "method": run.name,
            "confidence_pct": _round(conf) if run.uses_provider else None,
            "elements_per_section": _round(elements) if run.uses_provider else None,
            "runtime_minutes": _round(run.runtime_seconds / 60.0),
            "tokens_millions": _round(run.ledger.get("total_tokens", 0) / 1e6, 9),
            "file_existence_pct": _round(file_existence_accuracy(run.traces, files)),
            "file_mapping_pct": _round(file_mapping_accuracy(run.traces, gt)),
            "mean_drift": _round(mean_drift),
            "file_precision_pct": _round(file_mapping_precision(run.traces, gt)),
            "errored_sections": len(run.traces) - len(ok),
        })
        sections[run.name] = [
            {"section_id": t.section_id, "status": t.status, "drift": d,
             "files": sorted(t.file_paths)}
            for t, d in zip(ok, drifts)
        ]
    return EvalReport(rows, sections)
