"""Hierarchical specification-to-code traceability for C/C++ repositories."""

__version__ = "0.1.0"

from .corpus import DocChunk, SpecDocument, SpecSection, extract_query_terms, load_spec, parse_spec_markdown, semantic_chunk
from .pipeline import PipelineConfig, PipelineRun, SectionTrace, run_pipeline

__all__ = [
    "__version__",
    "DocChunk", "SpecDocument", "SpecSection", "extract_query_terms", "load_spec",
    "parse_spec_markdown", "semantic_chunk",
    "PipelineConfig", "PipelineRun", "SectionTrace", "run_pipeline",
]
