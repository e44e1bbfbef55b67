from __future__ import annotations

import json
from pathlib import Path

import pytest

from spectrace.baselines import HashEmbedder, HybridWeights, build_hybrid_index, run_grep, run_hybrid
from spectrace.corpus import load_spec
from spectrace.evaluator import load_ground_truth
from spectrace.pipeline import run_pipeline
from spectrace.provider import make_provider
from spectrace.repo import StructureDocs, build_model

DATA = Path(__file__).resolve().parents[1] / "src" / "spectrace" / "data"
NFC = DATA / "nfc"
CCORPUS = DATA / "ccorpus"

# fixture baseline settings, mirrored in data/nfc/config.json
GREP_K = 2
FIXTURE_WEIGHTS = HybridWeights(prefilter_k=20, final_k=2)
EMBED_DIM = 64


@pytest.fixture(scope="session")
def nfc_model():
    return build_model(NFC / "repo")


@pytest.fixture(scope="session")
def nfc_spec():
    return load_spec(NFC / "spec.md")


@pytest.fixture(scope="session")
def nfc_gt():
    return load_ground_truth(NFC / "ground_truth.json")


@pytest.fixture(scope="session")
def oracle_docs(nfc_model):
    provider = make_provider("oracle")
    docs = StructureDocs(nfc_model, provider)
    docs.build_all()
    return docs


@pytest.fixture(scope="session")
def pipeline_run(nfc_spec, nfc_model):
    return run_pipeline(nfc_spec, nfc_model, make_provider("oracle"), workers=1)


@pytest.fixture(scope="session")
def grep_run(nfc_spec, nfc_model):
    return run_grep(nfc_spec, nfc_model, GREP_K)


@pytest.fixture(scope="session")
def embedder():
    return HashEmbedder(EMBED_DIM, 0)


@pytest.fixture(scope="session")
def hybrid_index(nfc_model, oracle_docs, embedder):
    descriptions = {}
    for f in nfc_model.files:
        descriptions.update(oracle_docs.symbol_descriptions(f))
    return build_hybrid_index(nfc_model, embedder, descriptions)


@pytest.fixture(scope="session")
def hybrid_run(nfc_spec, nfc_model, hybrid_index, embedder):
    return run_hybrid(nfc_spec, nfc_model, hybrid_index, embedder, FIXTURE_WEIGHTS)


@pytest.fixture(scope="session")
def c_labels():
    return json.loads((CCORPUS / "labels.json").read_text())


@pytest.fixture
def fixture_config(tmp_path):
    """A config file pointing at the bundled fixture, writing under tmp_path."""
    cfg = {
        "repo_root": str(NFC / "repo"),
        "spec_path": str(NFC / "spec.md"),
        "output_dir": str(tmp_path / "out"),
        "provider": {"kind": "oracle"},
        "baseline": {"grep_k": GREP_K, "embedder": f"hash:{EMBED_DIM}:0",
                     "weights": {"prefilter_k": 20, "final_k": 2}},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
