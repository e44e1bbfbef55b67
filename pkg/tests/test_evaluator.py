import json
import logging

import pytest
from hypothesis import given, settings, strategies as st

from conftest import NFC
from spectrace.errors import MissingGroundTruth
from spectrace.evaluator import (
    GroundTruthEntry,
    MethodRun,
    compare_methods,
    confidence_and_coverage,
    drift_breakdown,
    drift_score,
    file_existence_accuracy,
    file_mapping_accuracy,
    gap_report,
    load_ground_truth,
)
from spectrace.pipeline import SectionTrace
from spectrace.provider import STATUSES
from spectrace.repo import CodeSymbol


def _trace(sid, files=(), folders=(), syms=(), status="Implemented", error=None):
    return SectionTrace(sid, folders=tuple((f, 1.0) for f in folders),
                        files=tuple((f, 1.0) for f in files),
                        validated_symbols=tuple(syms), status=None if error else status, error=error)


def _sym(name, file, kind="function", line=1):
    return CodeSymbol(file, line, name, kind)


def _exact_trace(entry, nfc_model):
    by_key = {(s.name, s.kind): s for s in nfc_model.symbols if not s.declaration}
    return _trace(entry.section_id, entry.expected_files, entry.expected_folders,
                  [(by_key[k], 1.0) for k in sorted(entry.expected_symbols)])


# ---- existence and mapping

def test_existence_one_ghost_in_ten():
    real = [f"f{i}.c" for i in range(9)]
    traces = [_trace(str(i), [f]) for i, f in enumerate(real + ["ghost.c"])]
    assert file_existence_accuracy(traces, real) == pytest.approx(90.0)


def test_existence_nothing_mapped():
    assert file_existence_accuracy([_trace("1")], ["a.c"]) == 100.0


def test_existence_baselines_on_fixture(grep_run, hybrid_run, nfc_model):
    assert file_existence_accuracy(grep_run.traces, nfc_model) == 100.0
    assert file_existence_accuracy(hybrid_run.traces, nfc_model) == 100.0


def test_mapping_equal_sets():
    gt = load_ground_truth([{"section_id": "1", "expected_files": ["a.c", "b.c"]}])
    assert file_mapping_accuracy([_trace("1", ["b.c", "a.c"])], gt) == 100.0


def test_mapping_macro_average():
    gt = load_ground_truth([{"section_id": str(i), "expected_files": ["x.c", "y.c"]} for i in range(10)])
    traces = [_trace(str(i), ["x.c", "y.c"] if i < 8 else ["x.c"]) for i in range(10)]
    assert file_mapping_accuracy(traces, gt) == pytest.approx(90.0)


def test_mapping_missing_ground_truth():
    with pytest.raises(MissingGroundTruth) as e:
        file_mapping_accuracy([_trace("7", ["a.c"])], {})
    assert "7" in str(e.value)


def test_errored_sections_excluded():
    gt = load_ground_truth([{"section_id": "1", "expected_files": ["a.c"]}])
    traces = [_trace("1", ["a.c"]), _trace("2", ["ghost.c"], error="boom")]
    assert file_mapping_accuracy(traces, gt) == 100.0
    assert file_existence_accuracy(traces, ["a.c"]) == 100.0


def test_duplicate_ground_truth_rejected():
    with pytest.raises(ValueError):
        load_ground_truth([{"section_id": "1"}, {"section_id": "1"}])


# ---- confidence

def test_confidence_all_ones():
    s = _sym("f", "a.c")
    conf, elems = confidence_and_coverage([_trace("1", syms=[(s, 1.0)]), _trace("2", syms=[(s, 1.0)])])
    assert (conf, elems) == (100.0, 1.0)


def test_confidence_empty_warns(caplog):
    with caplog.at_level(logging.WARNING):
        assert confidence_and_coverage([]) == (0.0, 0.0)
    assert "no completed sections" in caplog.text


def test_confidence_baseline_is_none(grep_run):
    conf, elems = confidence_and_coverage(grep_run.traces)
    assert conf is None and elems > 0


def test_confidence_matches_hand_average(pipeline_run):
    confs = [c for t in pipeline_run.traces for _, c in t.validated_symbols]
    conf, elems = confidence_and_coverage(pipeline_run.traces)
    assert conf == pytest.approx(100 * sum(confs) / len(confs))
    assert elems == pytest.approx(len(confs) / len(pipeline_run.traces))


# ---- drift

def test_drift_exact_is_zero(nfc_gt, nfc_model):
    for entry in nfc_gt.values():
        assert drift_score(_exact_trace(entry, nfc_model), entry) == 0.0


def test_drift_one_extra_same_layer_function(nfc_gt, nfc_model):
    entry = nfc_gt["1"]
    base = _exact_trace(entry, nfc_model)
    extra = _sym("nfcService_Extra", "src/service/nfc_service.c", line=40)
    t = SectionTrace("1", base.folders, base.files, validated_symbols=base.validated_symbols + ((extra, 1.0),),
                     status="Implemented")
    assert drift_breakdown(t, entry) == {"folder": 0.0, "file": 0.0, "symbol": 0.3, "total": 0.3}


def test_drift_rubric_levels():
    entry = GroundTruthEntry("1", expected_files=frozenset({"svc/a.c"}),
                             layers={"svc": "service", "hal": "hal"})
    assert drift_breakdown(_trace("1", ["svc/a.c", "svc/b.c"]), entry)["file"] == 0.3
    assert drift_breakdown(_trace("1", ["svc/b.c"]), entry)["file"] == 0.5
    assert drift_breakdown(_trace("1", ["hal/x.c"]), entry)["file"] == 1.0
    assert drift_breakdown(_trace("1", []), entry)["file"] == 1.0


def test_section_one_drift_anchors(nfc_gt, pipeline_run, grep_run, hybrid_run):
    def d(run):
        (t,) = [t for t in run.traces if t.section_id == "1"]
        return drift_score(t, nfc_gt)

    assert (d(pipeline_run), d(hybrid_run), d(grep_run)) == (0.3, 1.5, 2.5)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.sampled_from(["svc/a.c", "svc/b.c", "hal/c.c", "x/d.c"]), max_size=4),
       st.sets(st.sampled_from(["svc/a.c", "svc/b.c", "hal/c.c"]), max_size=3))
def test_drift_bounds(mapped, expected):
    entry = GroundTruthEntry("1", expected_files=frozenset(expected), layers={"svc": "s", "hal": "h"})
    b = drift_breakdown(_trace("1", sorted(mapped)), entry)
    assert all(b[k] in (0.0, 0.3, 0.5, 1.0) for k in ("folder", "file", "symbol"))
    assert 0.0 <= b["total"] <= 3.0
    assert (b["file"] == 0.0) == (mapped == expected)


# ---- gap report

def test_gap_report_all_implemented():
    rep = gap_report([_trace("1"), _trace("2")])
    assert rep.gaps == [] and "_None._" in rep.markdown


def test_gap_report_fixture(pipeline_run, nfc_gt):
    rep = gap_report(pipeline_run.traces, nfc_gt)
    assert rep.groups["Not_Implemented"] == ["9", "10"]
    assert set(rep.gaps) == {"9", "10", "2"}
    assert "### 9" in rep.markdown


def test_gap_groups_partition():
    traces = [_trace(str(i), status=s) for i, s in enumerate(STATUSES)] + [_trace("x", error="e")]
    rep = gap_report(traces)
    ids = [sid for g in rep.groups.values() for sid in g]
    assert sorted(ids) == sorted(t.section_id for t in traces)
    assert rep.groups["Errored"] == ["x"]


# ---- comparison table

def _runs(pipeline_run, grep_run, hybrid_run, runtime=0.0):
    return [MethodRun("hierarchical", pipeline_run.traces, pipeline_run.ledger, runtime),
            MethodRun("grep", grep_run.traces, grep_run.ledger, runtime, False),
            MethodRun("hybrid", hybrid_run.traces, hybrid_run.ledger, runtime, False)]


def test_compare_single_row(pipeline_run, nfc_model, nfc_gt):
    rep = compare_methods(_runs(pipeline_run, pipeline_run, pipeline_run)[:1], nfc_model, nfc_gt)
    (row,) = rep.rows
    assert row["tokens_millions"] == pytest.approx(pipeline_run.ledger["total_tokens"] / 1e6)
    assert row["errored_sections"] == 0


def test_compare_is_pure(pipeline_run, grep_run, hybrid_run, nfc_model, nfc_gt):
    runs = _runs(pipeline_run, grep_run, hybrid_run)
    assert compare_methods(runs, nfc_model, nfc_gt).to_json() == compare_methods(runs, nfc_model, nfc_gt).to_json()


def test_compare_matches_golden(pipeline_run, grep_run, hybrid_run, nfc_model, nfc_gt):
    got = json.loads(compare_methods(_runs(pipeline_run, grep_run, hybrid_run, 12.0), nfc_model, nfc_gt).to_json())
    want = json.loads((NFC / "golden" / "eval_report.json").read_text())
    for r in got["rows"] + want["rows"]:
        r.pop("runtime_minutes")
    assert got == want


def test_compare_bounds(pipeline_run, grep_run, hybrid_run, nfc_model, nfc_gt):
    rep = compare_methods(_runs(pipeline_run, grep_run, hybrid_run), nfc_model, nfc_gt)
    for r in rep.rows:
        for k in ("file_existence_pct", "file_mapping_pct", "file_precision_pct"):
            assert 0.0 <= r[k] <= 100.0
        assert 0.0 <= r["mean_drift"] <= 3.0
    md = rep.to_markdown()
    assert md.count("\n") == 5 and "N/A" in md
