"""``spectrace`` command line: index, map, baseline, eval.

Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .baselines import (
    HybridIndex,
    build_hybrid_index,
    embedder_from_spec,
    run_grep,
    run_hybrid,
)
from .config import RunConfig, load_config
from .corpus import load_spec
from .errors import ConfigError, SpectraceError
from .evaluator import MethodRun, compare_methods, gap_report, load_ground_truth
from .pipeline import run_pipeline
from .provider import make_provider
from .repo import RepoModel, StructureCache, StructureDocs, build_model, scan_repository
from .runs import RunRecord, atomic_write_text, make_run_id

logger = logging.getLogger("spectrace")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
METHODS = ("grep", "hybrid")


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps({
            "ts": round(record.created, 3),
            "level": record.levelname.lower(),
            "logger": record.name,
            "msg": record.getMessage(),
        })


def setup_logging(quiet: bool = False, json_logs: bool = False) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonFormatter() if json_logs else logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    for h in list(root.handlers):
        if getattr(h, "_spectrace", False):
            root.removeHandler(h)
    handler._spectrace = True
    root.addHandler(handler)
    root.setLevel(logging.WARNING if quiet else logging.INFO)


# ---------------------------------------------------------------- helpers

def _out(config: RunConfig) -> Path:
    return Path(config.output_dir)


def _model(config: RunConfig) -> RepoModel:
    return build_model(config.repo_root, tags_path=config.tags_source)


def _provider(config: RunConfig):
    p = config.provider
    return make_provider(p.kind, endpoint=p.endpoint, model=p.model, transcript_path=p.transcript_path,
                         record=p.record, max_in_flight=p.max_in_flight)


def _docs(config: RunConfig, model: RepoModel, provider) -> StructureDocs:
    return StructureDocs(model, provider, StructureCache(_out(config) / "structures"))


def _save_record(config: RunConfig, method: str, traces, ledger, runtime, extra=None) -> Path:
    run_id = make_run_id(config.config_hash())
    record = RunRecord(run_id, method, config.to_dict(), traces, ledger, runtime, extra=extra or {})
    path = record.save(_out(config) / "runs" / f"{run_id}-{method}.json")
    logger.info("wrote %s", path)
    return path


# ---------------------------------------------------------------- commands

def cmd_index(config: RunConfig) -> int:
    config.validate_paths()
    start = time.perf_counter()
    model = _model(config)
    provider = _provider(config)
    try:
        docs = _docs(config, model, provider)
        docs.build_all()
    finally:
        provider.close()
    summary = {
        "files": len(model.files),
        "folders": len(model.folders),
        "symbols": len(model.symbols),
        "docs_generated": docs.cache.generated,
        "docs_cached": docs.cache.hits,
        "provider_calls": provider.ledger.calls(),
        "ledger": provider.ledger.to_dict(),
        "runtime_seconds": time.perf_counter() - start,
    }
    atomic_write_text(_out(config) / "index" / "index_summary.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
    logger.info("indexed %d files, %d symbols; %d docs generated, %d provider calls",
                summary["files"], summary["symbols"], summary["docs_generated"], summary["provider_calls"])
    return EXIT_OK


def cmd_map(config: RunConfig) -> int:
    config.validate_paths(need_spec=True)
    spec = load_spec(config.spec_path)
    model = _model(config)
    provider = _provider(config)
    try:
        run = run_pipeline(spec, model, provider, config.pipeline, _docs(config, model, provider),
                           workers=config.worker_limit)
    finally:
        provider.close()
    path = _save_record(config, "hierarchical", run.traces, run.ledger, run.runtime_seconds)
    print(path)
    return EXIT_OK


def load_or_build_index(config: RunConfig, model: RepoModel, docs: StructureDocs, embed) -> HybridIndex:
    path = _out(config) / "index" / "hybrid_index.json"
    descriptions: dict[str, str] = {}
    for f in model.files:
        descriptions.update(docs.symbol_descriptions(f))
    fresh = build_hybrid_index(model, embed, descriptions, workers=config.worker_limit)
    if path.exists():
        try:
            cached = HybridIndex.load(path)
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            logger.warning("unreadable index snapshot %s (%s); rebuilding", path, exc)
        else:
            if cached.fingerprint == fresh.fingerprint and cached.embedder == fresh.embedder:
                return cached
            logger.info("index snapshot is stale; rebuilding")
    fresh.save(path)
    logger.info("wrote %s (%d documents)", path, len(fresh))
    return fresh


def cmd_baseline(config: RunConfig, method: str) -> int:
    if method not in METHODS:
        raise ConfigError(f"unknown baseline method {method!r}; choose from {', '.join(METHODS)}")
    config.validate_paths(need_spec=True)
    spec = load_spec(config.spec_path)
    model = _model(config)
    bc = config.baseline
    if method == "grep":
        run = run_grep(spec, model, bc.grep_k)
        extra = {"grep_k": bc.grep_k}
    else:
        embed = embedder_from_spec(bc.embedder)
        provider = _provider(config)
        try:
            index = load_or_build_index(config, model, _docs(config, model, provider), embed)
        finally:
            provider.close()
        run = run_hybrid(spec, model, index, embed, bc.weights, bc.window_sentences, bc.boundary_threshold)
        extra = {"weights": bc.weights.to_dict(), "embedder": bc.embedder, "index_fingerprint": index.fingerprint}
    path = _save_record(config, method, run.traces, run.ledger, run.runtime_seconds, extra)
    print(path)
    return EXIT_OK


def cmd_eval(run_files: list[str], ground_truth: str, out_dir: str | None = None) -> int:
    if not run_files:
        raise ConfigError("eval needs at least one run file")
    if not Path(ground_truth).is_file():
        raise ConfigError(f"ground truth file not found: {ground_truth}")
    gt = load_ground_truth(ground_truth)
    records = []
    for f in run_files:
        if not Path(f).is_file():
            raise ConfigError(f"run file not found: {f}")
        records.append(RunRecord.load(f))
    roots = {r.config["repo_root"] for r in records}
    files: set[str] = set()
    for root in sorted(roots):
        files |= set(scan_repository(root).files)
    runs = [MethodRun(r.method, r.traces, r.ledger, r.runtime_seconds, r.uses_provider) for r in records]
    report = compare_methods(runs, files, gt)

    out = Path(out_dir) if out_dir else Path(run_files[0]).resolve().parent.parent / "eval"
    for r in roots:
        if Path(out).resolve().as_posix().startswith(Path(r).resolve().as_posix() + "/"):
            raise ConfigError("output directory must not be inside repo_root")
    atomic_write_text(out / "report.json", report.to_json())
    atomic_write_text(out / "report.md", report.to_markdown())
    for r in records:
        if r.uses_provider:
            atomic_write_text(out / f"gap_report_{r.run_id}.md", gap_report(r.traces, gt).markdown + "\n")
    sys.stdout.write(report.to_markdown())
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    common.add_argument("--json-logs", action="store_true", help="log JSON lines to stderr")

    parser = argparse.ArgumentParser(prog="spectrace", parents=[common],
                                     description="Map specification sections to repository code.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", required=True, help="run configuration JSON")
        p.add_argument("--out", help="output directory (overrides output_dir)")
        return p

    with_config(sub.add_parser("index", parents=[common], help="scan, extract symbols, write structure docs"))
    with_config(sub.add_parser("map", parents=[common], help="run the hierarchical pipeline"))
    b = with_config(sub.add_parser("baseline", parents=[common], help="run a baseline"))
    b.add_argument("--method", required=True, choices=METHODS)
    e = sub.add_parser("eval", parents=[common], help="compare runs against ground truth")
    e.add_argument("runs", nargs="+", help="run record JSON files")
    e.add_argument("--ground-truth", required=True)
    e.add_argument("--out", help="report directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    setup_logging(args.quiet, args.json_logs)
    try:
        if args.command == "eval":
            return cmd_eval(args.runs, args.ground_truth, args.out)
        config = load_config(args.config)
        if args.out:
            config = replace(config, output_dir=str(Path(args.out).resolve()))
        if args.command == "index":
            return cmd_index(config)
        if args.command == "map":
            return cmd_map(config)
        return cmd_baseline(config, args.method)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except (SpectraceError, OSError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
