from .clexer import extract_symbols_builtin, header_comment, leading_comment
from .model import (
    SYMBOL_KINDS,
    CodeSymbol,
    RepoModel,
    is_proper_ancestor,
    is_under,
    normalize_path,
    parent_folder,
    scan_repository,
)
from .structure import (
    StructureCache,
    StructureDoc,
    StructureDocs,
    file_doc_name,
    generate_file_structure_doc,
    generate_folder_structure_doc,
    generate_repo_structure_doc,
)
from .tags import TagIngestReport, ingest_tags_stream


def extract_all_builtin(model: RepoModel) -> RepoModel:
    """Run the built-in lexer over every file of a scanned model."""
    symbols = []
    for f in model.files:
        symbols.extend(extract_symbols_builtin(f, model.read_text(f)))
    return model.with_symbols(symbols)


def build_model(root, tags_path=None, prefer_tags: bool = True, **scan_kw) -> RepoModel:
    """Scan ``root`` and attach symbols from a tags file or the built-in lexer."""
    model = scan_repository(root, **scan_kw)
    if tags_path is not None and prefer_tags:
        with open(tags_path, encoding="utf-8") as fh:
            model, _ = ingest_tags_stream(fh, model)
        return model
    return extract_all_builtin(model)
