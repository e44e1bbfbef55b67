"""Okapi BM25 over tokenized documents."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

K1 = 1.2
B = 0.75


@dataclass
class BM25Stats:
    doc_ids: list[str]
    term_freqs: list[dict[str, int]]
    doc_freqs: dict[str, int]
    doc_lengths: list[int]
    avg_length: float

    @classmethod
    def build(cls, docs: Sequence[tuple[str, Sequence[str]]]) -> "BM25Stats":
        ids, tfs, lengths = [], [], []
        df: Counter = Counter()
        for doc_id, tokens in docs:
            tf = Counter(tokens)
            ids.append(doc_id)
            tfs.append(dict(tf))
            lengths.append(len(tokens))
            df.update(tf.keys())
        avg = sum(lengths) / len(lengths) if lengths else 0.0
        return cls(ids, tfs, dict(df), lengths, avg)

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def idf(self, term: str) -> float:
        df = self.doc_freqs.get(term, 0)
        return math.log((self.n_docs - df + 0.5) / (df + 0.5) + 1.0)

    def to_dict(self) -> dict:
        return {
            "doc_ids": self.doc_ids,
            "term_freqs": self.term_freqs,
            "doc_freqs": self.doc_freqs,
            "doc_lengths": self.doc_lengths,
            "avg_length": self.avg_length,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BM25Stats":
        return cls(d["doc_ids"], d["term_freqs"], d["doc_freqs"], d["doc_lengths"], d["avg_length"])


def bm25_score(query_terms: Iterable[str], doc_index: int, stats: BM25Stats,
               k1: float = K1, b: float = B) -> float:
    """Score one indexed document. Repeated query terms count once."""
    if k1 <= 0 or not 0.0 <= b <= 1.0:
        raise ValueError("need k1 > 0 and 0 <= b <= 1")
    tf = stats.term_freqs[doc_index]
    dl = stats.doc_lengths[doc_index]
    norm = k1 * (1.0 - b + b * dl / stats.avg_length) if stats.avg_length > 0 else k1
    score = 0.0
    for term in sorted(set(query_terms)):
        f = tf.get(term, 0)
        if f:
            score += stats.idf(term) * f * (k1 + 1.0) / (f + norm)
    return score


def bm25_scores(query_terms: Iterable[str], stats: BM25Stats, k1: float = K1, b: float = B) -> list[float]:
    terms = sorted(set(query_terms))
    return [bm25_score(terms, i, stats, k1, b) for i in range(stats.n_docs)]
