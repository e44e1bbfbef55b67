import os
import shutil

import pytest
from hypothesis import given, strategies as st

from conftest import CCORPUS, NFC
from spectrace.errors import RootNotFound
from spectrace.provider import make_provider
from spectrace.repo import (
    SYMBOL_KINDS,
    StructureCache,
    StructureDocs,
    build_model,
    extract_symbols_builtin,
    file_doc_name,
    generate_file_structure_doc,
    generate_repo_structure_doc,
    ingest_tags_stream,
    is_proper_ancestor,
    normalize_path,
    scan_repository,
)


# ---- scanning

def test_fixture_folders(nfc_model):
    assert {"src/service", "src/halimpl"} <= set(nfc_model.folders)
    assert nfc_model.files == sorted(nfc_model.files)
    assert nfc_model.folders == sorted(nfc_model.folders)


def test_build_dir_excluded(nfc_model):
    on_disk = []
    for dirpath, _, names in os.walk(NFC / "repo"):
        rel = os.path.relpath(dirpath, NFC / "repo")
        on_disk += [os.path.normpath(os.path.join(rel, n)).replace(os.sep, "/") for n in names]
    expected = sorted(p for p in on_disk if not p.startswith("build/") and p.endswith((".c", ".h")))
    assert "build/generated_config.h" in on_disk
    assert nfc_model.files == expected


def test_empty_directory(tmp_path):
    m = scan_repository(tmp_path)
    assert m.folders == [""] and m.files == []


def test_missing_root(tmp_path):
    with pytest.raises(RootNotFound):
        scan_repository(tmp_path / "nope")


def test_parent_chain_present(nfc_model):
    folders = set(nfc_model.folders)
    for f in nfc_model.files:
        parts = f.split("/")[:-1]
        for i in range(len(parts) + 1):
            assert "/".join(parts[:i]) in folders


@given(st.lists(st.sampled_from(["a", "b", ".", "..", ""]), max_size=8))
def test_normalize_path_has_no_dots(parts):
    p = normalize_path("/".join(parts))
    assert not p.endswith("/") and "." not in p.split("/") and ".." not in p.split("/")
    assert normalize_path(p) == p


# ---- builtin lexer

def test_define_single_line():
    syms = extract_symbols_builtin("x.h", "// hdr\n\n#define MAX_LEN 64\n")
    assert [(s.name, s.kind, s.line_start, s.line_end) for s in syms] == [("MAX_LEN", "macro", 3, 3)]


def test_anonymous_typedef_struct():
    syms = extract_symbols_builtin("p.h", "typedef struct { int x; } point_t;\n")
    assert sorted((s.name, s.kind) for s in syms) == [("point_t", "struct"), ("point_t", "typedef")]


def test_comments_and_strings_ignored():
    src = '/* int fake(void) { } */\nconst char *s = "void g(void) {";\nint real(void)\n{\n  return 0;\n}\n'
    names = {s.name for s in extract_symbols_builtin("c.c", src)}
    assert "fake" not in names and "g" not in names and "real" in names


def test_unbalanced_braces_close_at_eof():
    syms = extract_symbols_builtin("u.c", "int f(void)\n{\n  if (1) {\n")
    (f,) = [s for s in syms if s.name == "f"]
    assert f.line_end == 3 and f.unbalanced


def test_nfc_service_init_range(nfc_model):
    (s,) = [s for s in nfc_model.symbols if s.name == "nfcService_Init" and not s.declaration]
    # hand-labeled: definition on line 7, closing brace on line 14
    assert (s.file, s.kind, s.line_start, s.line_end) == ("src/service/nfc_service.c", "function", 7, 14)


def test_c_corpus_labels(c_labels):
    m = build_model(CCORPUS)
    got = {(s.name, s.kind, s.file, s.line_start) for s in m.symbols}
    want = {(d["name"], d["kind"], d["file"], d["line_start"]) for d in c_labels}
    assert got == want
    assert {k for _, k, _, _ in want} == set(SYMBOL_KINDS)


def test_symbol_containment(nfc_model):
    for s in nfc_model.symbols:
        assert s.file in nfc_model.files
        assert s.kind in SYMBOL_KINDS
        assert s.line_end <= len(nfc_model.read_text(s.file).splitlines())
    keys = [s.key for s in nfc_model.symbols]
    assert len(keys) == len(set(keys))


# ---- tags ingestion

def test_tag_line_to_function(tmp_path):
    (tmp_path / "service").mkdir()
    (tmp_path / "service" / "nfc_service.c").write_text("\n" * 50)
    model = scan_repository(tmp_path)
    line = '{"name":"nfcService_Init","path":"service/nfc_service.c","line":42,"kind":"function"}'
    m, rep = ingest_tags_stream([line], model)
    (s,) = m.symbols
    assert (s.name, s.kind, s.line_start, s.line_end) == ("nfcService_Init", "function", 42, 42)


def test_empty_stream_unchanged():
    model = scan_repository(CCORPUS)
    m, rep = ingest_tags_stream([], model)
    assert m.symbols == [] and not rep.errors


def test_fixture_tags_file():
    model = scan_repository(CCORPUS)
    lines = (CCORPUS / "tags.jsonl").read_text().splitlines()
    assert len(lines) == 25
    m, rep = ingest_tags_stream(lines, model)
    assert len(m.symbols) == 23 and rep.dropped == 2


def test_malformed_lines_collected():
    model = scan_repository(CCORPUS)
    lines = ["{bad json", '{"name":"X","path":"uart_drv.h","kind":"macro"}',
             '{"name":"Y","path":"uart_drv.h","line":5,"kind":"macro"}']
    m, rep = ingest_tags_stream(lines, model)
    assert [e.lineno for e in rep.errors] == [1, 2]
    assert [s.name for s in m.symbols] == ["Y"]


def test_kind_mapping():
    model = scan_repository(CCORPUS)
    tags = [
        '{"name":"A","path":"uart_drv.c","line":1,"kind":"variable","typeref":"typename:const int"}',
        '{"name":"B","path":"uart_drv.c","line":2,"kind":"variable","typeref":"typename:int"}',
        '{"name":"C","path":"uart_drv.c","line":3,"kind":"enumerator"}',
        '{"name":"D","path":"uart_drv.c","line":4,"kind":"prototype"}',
        '{"name":"E","path":"uart_drv.c","line":5,"kind":"namespace"}',
    ]
    m, rep = ingest_tags_stream(tags, model)
    assert {(s.name, s.kind, s.declaration) for s in m.symbols} == {
        ("A", "constant", False), ("C", "constant", False), ("D", "function", True)}
    assert rep.skipped_kinds["namespace"] == 1


def test_builtin_vs_tags_agree_on_functions_and_macros():
    builtin = build_model(CCORPUS)
    tags = build_model(CCORPUS, tags_path=CCORPUS / "tags.jsonl")

    def fm(m):
        return {(s.name, s.kind, s.file) for s in m.symbols if s.kind in ("function", "macro")}

    assert fm(builtin) == fm(tags) and fm(builtin)


# ---- structure docs

def test_file_doc_name():
    assert file_doc_name("service/nfc_service.c") == "nfc_service_c_structure.md"


def test_repo_doc_one_bullet_per_folder(nfc_model):
    a = generate_repo_structure_doc(nfc_model, make_provider("oracle"))
    b = generate_repo_structure_doc(nfc_model, make_provider("oracle"))
    assert a.content == b.content
    labels = [label for label, _ in a.entries()]
    assert labels == [f for f in nfc_model.folders if f]


def test_empty_repo_doc(tmp_path):
    doc = generate_repo_structure_doc(scan_repository(tmp_path), make_provider("oracle"))
    assert doc.entries() == [] and doc.content.startswith("# Repository structure")


def test_zero_symbol_file_doc(tmp_path):
    (tmp_path / "empty.c").write_text("/* nothing here */\n")
    m = build_model(tmp_path)
    doc = generate_file_structure_doc("empty.c", [], make_provider("oracle"), model=m)
    assert "_No symbols._" in doc.content


def test_file_doc_lists_symbols(nfc_model, oracle_docs):
    doc = oracle_docs.file("src/service/nfc_service.c")
    assert "`nfcService_Init` (function, L7-L14)" in doc.content


def _copy_repo(tmp_path):
    dst = tmp_path / "repo"
    shutil.copytree(NFC / "repo", dst)
    return dst


def test_cache_hit_makes_no_calls(tmp_path, nfc_model):
    out = tmp_path / "structures"
    p1 = make_provider("oracle")
    StructureDocs(nfc_model, p1, StructureCache(out)).build_all()
    before = {p: p.read_bytes() for p in out.rglob("*.md")}
    p2 = make_provider("oracle")
    docs = StructureDocs(nfc_model, p2, StructureCache(out))
    docs.build_all()
    assert p1.ledger.calls() > 0 and p2.ledger.calls() == 0
    assert docs.cache.generated == 0
    assert {p: p.read_bytes() for p in out.rglob("*.md")} == before
    assert (out / "src/service/folder_structure.md").exists()
    assert (out / "src/service/nfc_service_c_structure.md").exists()


def test_cache_invalidation_scope(tmp_path):
    root = _copy_repo(tmp_path)
    out = tmp_path / "structures"
    m1 = build_model(root)
    d1 = StructureDocs(m1, make_provider("oracle"), StructureCache(out))
    d1.build_all()
    keys1 = {(d.scope, d.target): d.cache_key for d in d1.cache._mem.values()}

    target = root / "src/utils/ringbuf.c"
    target.write_text(target.read_text() + "\n/* touched */\n")
    m2 = build_model(root)
    d2 = StructureDocs(m2, make_provider("oracle"), StructureCache(out))
    d2.build_all()
    keys2 = {(d.scope, d.target): d.cache_key for d in d2.cache._mem.values()}
    changed = {k for k in keys1 if keys1[k] != keys2[k]}
    assert changed == {("file", "src/utils/ringbuf.c"), ("folder", "src/utils"), ("repository", "")}
    assert d2.cache.generated == 3


def test_corrupted_cache_regenerates(tmp_path, nfc_model, caplog):
    out = tmp_path / "structures"
    StructureDocs(nfc_model, make_provider("oracle"), StructureCache(out)).build_all()
    victim = out / "src/service/nfc_service_c_structure.md"
    good = victim.read_bytes()
    victim.write_bytes(good[: len(good) // 2])
    docs = StructureDocs(nfc_model, make_provider("oracle"), StructureCache(out))
    docs.build_all()
    assert docs.cache.generated == 1
    assert victim.read_bytes() == good
    assert "corrupted structure doc" in caplog.text


def test_concurrent_requests_generate_once(nfc_model):
    from concurrent.futures import ThreadPoolExecutor

    provider = make_provider("oracle")
    docs = StructureDocs(nfc_model, provider)
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda _: docs.folder("src/service"), range(16)))
    assert len({r.content for r in results}) == 1
    assert docs.cache.generated == 1


def test_ancestor_helper():
    assert is_proper_ancestor("", "a") and is_proper_ancestor("a", "a/b")
    assert not is_proper_ancestor("a", "ab") and not is_proper_ancestor("a", "a")
