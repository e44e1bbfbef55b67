from .bm25 import BM25Stats, bm25_score, bm25_scores
from .embed import HashEmbedder, SentenceTransformerEmbedder, embedder_from_spec, l2_normalize
from .grep import KeywordMatch, file_scores, grep_search
from .hybrid import HybridIndex, HybridWeights, build_hybrid_index, hybrid_search, prefilter, symbol_document
from .runner import baseline_to_trace, collapse_folders, run_grep, run_hybrid, search_section, section_chunks

__all__ = [
    "BM25Stats", "bm25_score", "bm25_scores",
    "HashEmbedder", "SentenceTransformerEmbedder", "embedder_from_spec", "l2_normalize",
    "KeywordMatch", "file_scores", "grep_search",
    "HybridIndex", "HybridWeights", "build_hybrid_index", "hybrid_search", "prefilter", "symbol_document",
    "baseline_to_trace", "collapse_folders", "run_grep", "run_hybrid", "search_section", "section_chunks",
]
