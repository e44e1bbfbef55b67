"""Trace one fixture section through all three methods and show where each lands.

The section covers service start-up and the HAL open call. The hierarchical
pipeline narrows folders, then files, then symbols; the baselines jump
straight to symbols by keyword or by hybrid similarity.
"""

from pathlib import Path

from spectrace.baselines import HashEmbedder, HybridWeights, build_hybrid_index, run_grep, run_hybrid
from spectrace.corpus import load_spec
from spectrace.evaluator import drift_breakdown, load_ground_truth
from spectrace.pipeline import run_pipeline
from spectrace.provider import make_provider
from spectrace.repo import StructureDocs, build_model

NFC = Path(__file__).resolve().parents[1] / "src" / "spectrace" / "data" / "nfc"

model = build_model(NFC / "repo")
spec = load_spec(NFC / "spec.md")
gt = load_ground_truth(NFC / "ground_truth.json")
section = spec.get("1")

docs = StructureDocs(model, make_provider("oracle"))
descriptions = {}
for f in model.files:
    descriptions.update(docs.symbol_descriptions(f))
embed = HashEmbedder(64, 0)
index = build_hybrid_index(model, embed, descriptions)

runs = {
    "hierarchical": run_pipeline(spec, model, make_provider("oracle"), docs=docs, workers=1),
    "grep": run_grep(spec, model, 2),
    "hybrid": run_hybrid(spec, model, index, embed, HybridWeights(prefilter_k=20, final_k=2)),
}

print(f"section {section.id}: {section.title}")
print("query terms:", ", ".join(section.query_terms))
print("expected files:", ", ".join(sorted(gt["1"].expected_files)))
print()
for name, run in runs.items():
    trace = run.traces[0]
    d = drift_breakdown(trace, gt["1"])
    print(f"== {name}  (drift {d['total']}: folder {d['folder']}, file {d['file']}, symbol {d['symbol']})")
    print("   folders:", trace.folder_paths)
    print("   files:  ", trace.file_paths)
    print("   symbols:", [s.name for s in trace.validated_list])
    print("   status: ", trace.status)
