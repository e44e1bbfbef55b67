"""BM25 + embedding hybrid search over per-symbol documents.

Snapshot format (JSON, ``format_version`` 1)::

    {"format_version": 1, "fingerprint": "<16 hex>", "embedder": "hash:64:0",
     "symbols": [CodeSymbol.to_dict(), ...], "documents": [str, ...],
     "tokens": [[str, ...], ...], "bm25": BM25Stats.to_dict(),
     "vectors": [[float.hex(), ...], ...]}

Vectors are stored as ``float.hex`` strings so a reload is bit-exact.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus import DocChunk
from ..errors import EmbeddingFailure, EmptyIndex
from ..repo import CodeSymbol, RepoModel
from ..text import code_tokens, combine_fingerprints, fnv1a64, jaccard
from .bm25 import B, K1, BM25Stats, bm25_score

FORMAT_VERSION = 1
NORM_TOLERANCE = 1e-9
EMBED_BATCH = 64

Embedder = Callable[[Sequence[str]], np.ndarray]


@dataclass(frozen=True)
class HybridWeights:
    w_bm25: float = 0.4
    w_overlap: float = 0.2
    w_vec: float = 0.4
    prefilter_k: int = 200
    final_k: int = 50

    def __post_init__(self):
        ws = (self.w_bm25, self.w_overlap, self.w_vec)
        if any(w < 0 for w in ws) or abs(sum(ws) - 1.0) > 1e-9:
            raise ValueError("hybrid weights must be non-negative and sum to 1")
        if self.final_k < 1 or self.prefilter_k < self.final_k:
            raise ValueError("need 1 <= final_k <= prefilter_k")

    def to_dict(self) -> dict:
        return {"w_bm25": self.w_bm25, "w_overlap": self.w_overlap, "w_vec": self.w_vec,
                "prefilter_k": self.prefilter_k, "final_k": self.final_k}


@dataclass(eq=False)
class HybridIndex:
    symbols: list[CodeSymbol]
    documents: list[str]
    tokens: list[list[str]]
    bm25: BM25Stats
    vectors: np.ndarray
    embedder: str
    fingerprint: str

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HybridIndex):
            return NotImplemented
        return (
            self.symbols == other.symbols
            and self.documents == other.documents
            and self.tokens == other.tokens
            and self.bm25 == other.bm25
            and self.vectors.shape == other.vectors.shape
            and self.vectors.tobytes() == other.vectors.tobytes()
            and self.embedder == other.embedder
            and self.fingerprint == other.fingerprint
        )

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "fingerprint": self.fingerprint,
            "embedder": self.embedder,
            "symbols": [s.to_dict() for s in self.symbols],
            "documents": self.documents,
            "tokens": self.tokens,
            "bm25": self.bm25.to_dict(),
            "vectors": [[float(x).hex() for x in row] for row in self.vectors],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HybridIndex":
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported index format {d.get('format_version')!r}")
        rows = [[float.fromhex(x) for x in row] for row in d["vectors"]]
        dim = len(rows[0]) if rows else 0
        return cls(
            symbols=[CodeSymbol.from_dict(s) for s in d["symbols"]],
            documents=list(d["documents"]),
            tokens=[list(t) for t in d["tokens"]],
            bm25=BM25Stats.from_dict(d["bm25"]),
            vectors=np.array(rows, dtype=np.float64).reshape(len(rows), dim),
            embedder=d["embedder"],
            fingerprint=d["fingerprint"],
        )

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "HybridIndex":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def symbol_document(symbol: CodeSymbol, description: str = "") -> str:
    return " ".join(p for p in (symbol.name, symbol.signature, description) if p)


def _embed_checked(embed: Embedder, texts: Sequence[str]) -> np.ndarray:
    try:
        vecs = np.asarray(embed(list(texts)), dtype=np.float64)
    except EmbeddingFailure:
        raise
    except Exception as exc:
        raise EmbeddingFailure(str(exc)) from exc
    if vecs.ndim != 2 or vecs.shape[0] != len(texts):
        raise EmbeddingFailure(f"embedder returned shape {vecs.shape} for {len(texts)} texts")
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    if np.any(norms == 0) or not np.all(np.isfinite(vecs)):
        raise EmbeddingFailure("embedder returned a zero or non-finite vector")
    return vecs / norms


def build_hybrid_index(model: RepoModel, embed: Embedder, descriptions: Mapping[str, str] | None = None,
                       include_declarations: bool = False, workers: int = 4) -> HybridIndex:
    """One document per symbol (name, signature, structure-doc description).

    ``descriptions`` maps symbol ids to their structure-doc text.
    """
    descriptions = descriptions or {}
    symbols = sorted(s for s in model.symbols if include_declarations or not s.declaration)
    documents = [symbol_document(s, descriptions.get(s.id, "")) for s in symbols]
    tokens = [code_tokens(d) for d in documents]
    stats = BM25Stats.build([(s.id, t) for s, t in zip(symbols, tokens)])

    batches = [documents[i: i + EMBED_BATCH] for i in range(0, len(documents), EMBED_BATCH)]
    if not batches:
        vectors = np.zeros((0, 0))
    elif workers <= 1 or len(batches) == 1:
        vectors = np.vstack([_embed_checked(embed, b) for b in batches])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vectors = np.vstack(list(pool.map(lambda b: _embed_checked(embed, b), batches)))

    fp = combine_fingerprints(
        [fnv1a64(d.encode("utf-8")) for d in documents] + [fnv1a64(s.id.encode("utf-8")) for s in symbols]
    )
    return HybridIndex(symbols, documents, tokens, stats, vectors,
                       getattr(embed, "spec", type(embed).__name__), f"{fp:016x}")


def prefilter(query_tokens: Sequence[str], index: HybridIndex, k: int,
              k1: float = K1, b: float = B) -> list[tuple[int, float]]:
    """Stage 1: (doc index, bm25) for the top ``k`` documents, ties by symbol id."""
    scored = [(i, bm25_score(query_tokens, i, index.bm25, k1, b)) for i in range(len(index))]
    scored.sort(key=lambda p: (-p[1], index.symbols[p[0]].id))
    return scored[:k]


def _chunk_vector(chunk: DocChunk, index: HybridIndex, vectors: Mapping[str, np.ndarray] | None,
                  embed: Embedder | None) -> np.ndarray:
    if vectors is not None and chunk.embedding_key in vectors:
        vec = np.asarray(vectors[chunk.embedding_key], dtype=np.float64)
        return vec / np.linalg.norm(vec)
    if embed is None:
        raise ValueError("chunk has no stored embedding and no embedder was given")
    return _embed_checked(embed, [chunk.text])[0]


def hybrid_search(chunk: DocChunk, index: HybridIndex, weights: HybridWeights | None = None,
                  vectors: Mapping[str, np.ndarray] | None = None,
                  embed: Embedder | None = None) -> list[tuple[CodeSymbol, float]]:
    """Two-stage ranking: BM25 prefilter, then weighted fusion over the candidates only."""
    weights = weights or HybridWeights()
    if len(index) == 0:
        raise EmptyIndex("hybrid index has no documents")
    q_tokens = code_tokens(chunk.text)
    q_set = set(q_tokens)
    q_vec = _chunk_vector(chunk, index, vectors, embed)

    cands = prefilter(q_tokens, index, weights.prefilter_k)
    raw = [s for _, s in cands]
    lo, hi = min(raw), max(raw)
    out = []
    for i, s in cands:
        norm = 0.5 if hi == lo else (s - lo) / (hi - lo)
        overlap = jaccard(q_set, set(index.tokens[i]))
        cos = float(np.dot(q_vec, index.vectors[i]))
        score = weights.w_bm25 * norm + weights.w_overlap * overlap + weights.w_vec * cos
        out.append((index.symbols[i], score))
    out.sort(key=lambda p: (-p[1], p[0].id))
    return out[: weights.final_k]
