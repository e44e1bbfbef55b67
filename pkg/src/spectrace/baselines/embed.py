"""Text embedders returning L2-normalized vectors."""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from ..errors import EmbeddingFailure
from ..text import code_tokens, fnv1a64

DEFAULT_DIM = 1024


def l2_normalize(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=np.float64)
    norms = np.linalg.norm(mat, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise EmbeddingFailure("cannot normalize a zero vector")
    return mat / norms


class HashEmbedder:
    """Bag-of-tokens random projection: each token maps to a fixed Gaussian vector.

    Deterministic across processes; cosine similarity tracks token overlap.
    """

    def __init__(self, dim: int = DEFAULT_DIM, seed: int = 0):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim
        self.seed = seed
        self._vec = lru_cache(maxsize=65536)(self._token_vector)

    @property
    def spec(self) -> str:
        return f"hash:{self.dim}:{self.seed}"

    def _token_vector(self, token: str) -> np.ndarray:
        rng = np.random.default_rng([fnv1a64(token.encode("utf-8")), self.seed])
        return rng.standard_normal(self.dim)

    def embed_one(self, text: str) -> np.ndarray:
        counts = Counter(code_tokens(text)) or Counter({"<empty>": 1})
        acc = np.zeros(self.dim)
        for tok, c in sorted(counts.items()):
            acc += c * self._vec(tok)
        return l2_normalize(acc)

    def __call__(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim))
        return np.vstack([self.embed_one(t) for t in texts])


class SentenceTransformerEmbedder:
    """Wraps a sentence-transformers model such as ``intfloat/e5-large-v2`` (1024-d)."""

    def __init__(self, model_name: str = "intfloat/e5-large-v2", prefix: str = "passage: "):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover - optional dependency
            raise EmbeddingFailure("sentence-transformers is not installed") from exc
        self.model_name = model_name
        self.prefix = prefix
        self._model = SentenceTransformer(model_name)
        self.dim = int(self._model.get_sentence_embedding_dimension())

    @property
    def spec(self) -> str:
        return f"st:{self.model_name}"

    def __call__(self, texts: Sequence[str]) -> np.ndarray:  # pragma: no cover - needs model weights
        vecs = self._model.encode([self.prefix + t for t in texts], convert_to_numpy=True)
        return l2_normalize(vecs)


def embedder_from_spec(spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "hash":
        dim, _, seed = rest.partition(":")
        return HashEmbedder(int(dim), int(seed or 0))
    if kind == "st":
        return SentenceTransformerEmbedder(rest)
    raise ValueError(f"unknown embedder spec {spec!r}")
