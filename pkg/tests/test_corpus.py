import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA, NFC
from spectrace.baselines import HashEmbedder
from spectrace.corpus import (
    SpecSection,
    extract_query_terms,
    parse_spec_markdown,
    render_spec,
    semantic_chunk,
    split_sentences,
)
from spectrace.errors import EmbeddingFailure, EmptyDocument

TWO_TOPICS = (DATA / "chunking" / "two_topics.txt").read_text()


def test_single_heading():
    doc = parse_spec_markdown("# Intro\nabc")
    assert len(doc) == 1
    s = doc.sections[0]
    assert (s.id, s.title, s.body) == ("1", "Intro", "abc")


def test_numbered_heading_ids():
    doc = parse_spec_markdown("# 1 Introduction / Initialization\nx\n## 4.2 File Discovery\ny\n")
    assert [(s.id, s.title) for s in doc.sections] == [
        ("1", "Introduction / Initialization"), ("4.2", "File Discovery")]


def test_synthesized_ids_follow_nesting():
    doc = parse_spec_markdown("# A\n## B\n## C\n### D\n# E\n")
    assert [s.id for s in doc.sections] == ["1", "1.1", "1.2", "1.2.1", "2"]
    assert [s.order for s in doc.sections] == list(range(5))


def test_child_text_not_in_parent_body():
    doc = parse_spec_markdown("# A\nparent text\n## B\nchild text\n")
    assert doc.sections[0].body == "parent text"
    assert "child" not in doc.sections[0].body


def test_deep_headings_fold_into_parent():
    doc = parse_spec_markdown("# A\n##### deep\nbody\n")
    assert len(doc) == 1 and "deep" in doc.sections[0].body


def test_headings_inside_code_fences_ignored():
    doc = parse_spec_markdown("# A\n```\n# not a heading\n```\n")
    assert len(doc) == 1


def test_no_headings_raises():
    with pytest.raises(EmptyDocument):
        parse_spec_markdown("just prose\n")


def test_fixture_spec_sections(nfc_spec):
    # independent count: ATX headings of level <= 4 outside fences
    text = (NFC / "spec.md").read_text()
    n = len(re.findall(r"^#{1,4} ", text, flags=re.M))
    assert n == 10
    assert [s.id for s in nfc_spec.sections] == [str(i) for i in range(1, 11)]
    assert nfc_spec.get("1").title == "Introduction / Initialization"


def test_section_one_query_terms(nfc_spec):
    terms = set(nfc_spec.get("1").query_terms)
    assert {"NCI", "DH", "NFCC", "NFCEE", "RF", "interface", "logical", "connection"} <= terms


def test_acronym_priority(nfc_spec):
    terms = list(nfc_spec.get("2").query_terms)
    assert terms[0] == "I2C"


def test_stopword_only_section():
    assert extract_query_terms(SpecSection("1", "", "the of and", 0)) == []


def test_query_terms_cap_and_technical_first():
    s = SpecSection("1", "Setup", "call nfc_init then NCI reset; reset reset again with fooBar and x-ray", 0)
    terms = extract_query_terms(s, max_terms=3)
    assert len(terms) == 3
    assert set(terms) <= {"nfc_init", "NCI", "fooBar", "x-ray"}


def test_chunk_threshold_zero_single_chunk():
    chunks = semantic_chunk(TWO_TOPICS, HashEmbedder(64), 3, 0.0)
    assert len(chunks) == 1
    assert (chunks[0].start_offset, chunks[0].end_offset) == (0, len(TWO_TOPICS))


def test_chunk_empty_text():
    assert semantic_chunk("", HashEmbedder(64)) == []


def test_two_topic_seam():
    emb = HashEmbedder(64, 0)
    seam = TWO_TOPICS.index("AES encryption keys")
    # brute force: cosine between every adjacent pair of 3-sentence windows
    spans = split_sentences(TWO_TOPICS)
    below = []
    for b in range(1, len(spans)):
        left = TWO_TOPICS[spans[max(0, b - 3)][0]: spans[b - 1][1]]
        right = TWO_TOPICS[spans[b][0]: spans[min(len(spans), b + 3) - 1][1]]
        u, v = emb([left, right])
        if float(np.dot(u, v)) < 0.5:
            below.append(spans[b][0])
    assert below == [seam]

    chunks = semantic_chunk(TWO_TOPICS, emb, 3, 0.5)
    assert len(chunks) == 2
    assert chunks[1].start_offset == seam
    assert chunks[0].text.startswith("The GPIO") and chunks[1].text.startswith("AES")


def test_embedding_failure_propagates():
    def broken(texts):
        raise RuntimeError("model offline")

    with pytest.raises(EmbeddingFailure):
        semantic_chunk("One. Two. Three.", broken, 1, 0.5)


def test_window_must_be_positive():
    with pytest.raises(ValueError):
        semantic_chunk("a. b.", HashEmbedder(8), 0)


sentence = st.from_regex(r"[A-Za-z ]{1,20}[.?!]", fullmatch=True)


@settings(max_examples=40, deadline=None)
@given(st.lists(sentence, min_size=0, max_size=12), st.sampled_from([" ", "\n\n", "  "]),
       st.floats(0, 1), st.integers(1, 4))
def test_chunks_tile_the_text(sents, sep, threshold, window):
    text = sep.join(sents)
    chunks = semantic_chunk(text, HashEmbedder(16, 1), window, threshold)
    assert "".join(c.text for c in chunks) == text
    pos = 0
    for c in chunks:
        assert c.start_offset == pos < c.end_offset
        pos = c.end_offset
    assert pos == len(text)


title = st.from_regex(r"[A-Z][a-z]{2,8}( [a-z]{2,8}){0,2}", fullmatch=True)
body = st.from_regex(r"([a-z]{2,8} ){0,6}[a-z]{2,8}\.", fullmatch=True)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), title, body), min_size=1, max_size=8))
def test_parse_render_parse_idempotent(items):
    level = 1
    lines = []
    for want, t, b in items:
        level = min(want, level + 1)
        lines += [f"{'#' * level} {t}", b, ""]
    first = parse_spec_markdown("\n".join(lines))
    second = parse_spec_markdown(render_spec(first))
    key = [(s.id, s.title, s.body) for s in first.sections]
    assert key == [(s.id, s.title, s.body) for s in second.sections]
    assert len({s.id for s in first.sections}) == len(first.sections)


@given(st.text(min_size=0, max_size=200))
def test_query_terms_deterministic(text):
    s = SpecSection("1", "T", text, 0)
    assert extract_query_terms(s) == extract_query_terms(s)
