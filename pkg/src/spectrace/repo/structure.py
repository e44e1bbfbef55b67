"""Cached structure documentation at repository, folder and file scope."""

from __future__ import annotations

import logging
import os
import re
import tempfile
import threading
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path, PurePosixPath

from ..provider import SemanticProvider, describe_items
from ..text import combine_fingerprints, fnv1a64
from .clexer import first_sentence, header_comment, leading_comment
from .model import CodeSymbol, RepoModel, parent_folder

logger = logging.getLogger(__name__)

REPO_DOC_NAME = "repository_structure.md"
FOLDER_DOC_NAME = "folder_structure.md"
SAMPLE_FILES_PER_FOLDER = 8
DESCRIBE_BATCH = 40
NO_SYMBOLS = "_No symbols._"
ROOT_LABEL = "."

_HEADER_RE = re.compile(r"^<!-- spectrace cache_key=([0-9a-f]{16}) digest=([0-9a-f]{16}) -->\n")
_ENTRY_RE = re.compile(r"^- `([^`]+)`(?: \((\w+), L(\d+)-L(\d+)\))?: (.*)$")


@dataclass(frozen=True)
class StructureDoc:
    scope: str  # repository | folder | file
    target: str
    content: str
    cache_key: str

    def entries(self) -> list[tuple[str, str]]:
        """(label, description) bullets; labels are folder paths, file names or symbol names."""
        out = []
        for line in self.content.splitlines():
            m = _ENTRY_RE.match(line)
            if m:
                out.append((m.group(1), m.group(5)))
        return out

    def symbol_entries(self) -> dict[tuple[str, str, int], str]:
        out = {}
        for line in self.content.splitlines():
            m = _ENTRY_RE.match(line)
            if m and m.group(2):
                out[(m.group(1), m.group(2), int(m.group(3)))] = m.group(5)
        return out


def file_doc_name(file: str) -> str:
    p = PurePosixPath(file)
    ext = p.suffix.lstrip(".")
    return f"{p.stem}_{ext}_structure.md" if ext else f"{p.name}_structure.md"


def doc_relpath(scope: str, target: str) -> str:
    if scope == "repository":
        return REPO_DOC_NAME
    if scope == "folder":
        return f"{target}/{FOLDER_DOC_NAME}" if target else FOLDER_DOC_NAME
    folder = parent_folder(target)
    name = file_doc_name(target)
    return f"{folder}/{name}" if folder else name


class FingerprintCache:
    """Memoized 64-bit FNV-1a content hashes for repository files."""

    def __init__(self, model: RepoModel):
        self.model = model
        self._hashes: dict[str, int] = {}
        self._lock = threading.Lock()

    def file(self, path: str) -> int:
        with self._lock:
            h = self._hashes.get(path)
        if h is None:
            h = fnv1a64(self.model.read_bytes(path))
            with self._lock:
                self._hashes[path] = h
        return h

    def files(self, paths) -> int:
        parts = []
        for p in sorted(paths):
            parts.append(fnv1a64(p.encode("utf-8")))
            parts.append(self.file(p))
        return combine_fingerprints(parts)


def make_cache_key(scope: str, target: str, fingerprint: int) -> str:
    return f"{combine_fingerprints([fnv1a64(f'{scope}:{target}'.encode()), fingerprint]):016x}"


class StructureCache:
    """Check-then-generate store with at most one generation per cache key.

    With ``root`` set, docs persist as markdown files under it; otherwise the
    cache lives in memory only.
    """

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None
        self._mem: dict[tuple[str, str], StructureDoc] = {}
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._guard = threading.Lock()
        self.generated = 0
        self.hits = 0

    def _lock_for(self, slot) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(slot, threading.Lock())

    def path_for(self, scope: str, target: str) -> Path | None:
        return None if self.root is None else self.root / doc_relpath(scope, target)

    def _load(self, scope: str, target: str, key: str) -> StructureDoc | None:
        path = self.path_for(scope, target)
        if path is None or not path.exists():
            return None
        raw = path.read_text(encoding="utf-8")
        m = _HEADER_RE.match(raw)
        content = raw[m.end():] if m else None
        if m is None or f"{fnv1a64(content.encode('utf-8')):016x}" != m.group(2):
            logger.warning("corrupted structure doc %s; regenerating", path)
            return None
        if m.group(1) != key:
            return None
        return StructureDoc(scope, target, content, key)

    def _store(self, doc: StructureDoc) -> None:
        path = self.path_for(doc.scope, doc.target)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        digest = f"{fnv1a64(doc.content.encode('utf-8')):016x}"
        data = f"<!-- spectrace cache_key={doc.cache_key} digest={digest} -->\n{doc.content}"
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".md")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)

    def get_or_create(self, scope: str, target: str, key: str,
                      factory: Callable[[], str]) -> StructureDoc:
        slot = (scope, target)
        with self._lock_for(slot):
            doc = self._mem.get(slot)
            if doc is not None and doc.cache_key == key:
                self.hits += 1
                return doc
            doc = self._load(scope, target, key)
            if doc is None:
                doc = StructureDoc(scope, target, factory(), key)
                self._store(doc)
                self.generated += 1
            else:
                self.hits += 1
            self._mem[slot] = doc
            return doc


def _sanitize(desc: str) -> str:
    return " ".join(desc.replace("`", "'").split()) or "No description available."


class StructureDocs:
    """Generates the three doc scopes for one repository model."""

    def __init__(self, model: RepoModel, provider: SemanticProvider, cache: StructureCache | None = None,
                 include_declarations: bool = False):
        self.model = model
        self.provider = provider
        self.cache = cache if cache is not None else StructureCache()
        self.fingerprints = FingerprintCache(model)
        self.include_declarations = include_declarations
        self._text_cache: dict[str, str] = {}

    def _text(self, file: str) -> str:
        text = self._text_cache.get(file)
        if text is None:
            text = self.model.read_text(file)
            self._text_cache[file] = text
        return text

    def file_summary(self, file: str) -> str:
        return first_sentence(header_comment(self._text(file)))

    def _describe(self, items: list[dict], unit: str) -> dict[str, str]:
        out: dict[str, str] = {}
        for i in range(0, len(items), DESCRIBE_BATCH):
            out.update(describe_items(items[i: i + DESCRIBE_BATCH], unit, self.provider))
        return out

    def candidate_folders(self) -> list[str]:
        folders = [f for f in self.model.folders if f]
        if self.model.files_in(""):
            folders.insert(0, "")
        return folders

    def repository(self) -> StructureDoc:
        key = make_cache_key("repository", "", self.fingerprints.files(self.model.files))

        def build() -> str:
            lines = ["# Repository structure", ""]
            folders = self.candidate_folders()
            items = []
            for folder in folders:
                direct = self.model.files_in(folder)
                nested = [f for f in self.model.files_in(folder, recursive=True) if f not in direct]
                sample = (direct + nested)[:SAMPLE_FILES_PER_FOLDER]
                items.append({
                    "id": folder or ROOT_LABEL,
                    "name": folder or ROOT_LABEL,
                    "files": [PurePosixPath(f).name for f in sample],
                    "hints": [self.file_summary(f) for f in sample],
                })
            descs = self._describe(items, "folder")
            for folder in folders:
                label = folder or ROOT_LABEL
                lines.append(f"- `{label}`: {_sanitize(descs[label])}")
            return "\n".join(lines) + "\n"

        return self.cache.get_or_create("repository", "", key, build)

    def folder(self, folder: str) -> StructureDoc:
        files = self.model.files_in(folder)
        key = make_cache_key("folder", folder, self.fingerprints.files(files))

        def build() -> str:
            lines = [f"# Folder structure: {folder or ROOT_LABEL}", ""]
            items = []
            for f in files:
                syms = [s.name for s in self.model.symbol_by_file.get(f, []) if not s.declaration]
                items.append({
                    "id": f,
                    "name": PurePosixPath(f).name,
                    "hints": [header_comment(self._text(f))],
                    "symbols": syms[:12],
                })
            descs = self._describe(items, "file")
            for f in files:
                lines.append(f"- `{PurePosixPath(f).name}`: {_sanitize(descs[f])}")
            return "\n".join(lines) + "\n"

        return self.cache.get_or_create("folder", folder, key, build)

    def file_symbols(self, file: str) -> list[CodeSymbol]:
        syms = self.model.symbol_by_file.get(file, [])
        if self.include_declarations:
            return list(syms)
        return [s for s in syms if not s.declaration]

    def file(self, file: str) -> StructureDoc:
        symbols = self.file_symbols(file)
        sym_fp = fnv1a64("|".join(s.id for s in symbols).encode("utf-8"))
        key = make_cache_key("file", file, combine_fingerprints([self.fingerprints.file(file), sym_fp]))

        def build() -> str:
            lines = [f"# File structure: {file}", ""]
            if not symbols:
                return "\n".join(lines + [NO_SYMBOLS]) + "\n"
            text = self._text(file)
            items = [{
                "id": s.id,
                "name": s.name,
                "kind": s.kind,
                "signature": s.signature,
                "hints": [leading_comment(text, s.line_start)],
            } for s in symbols]
            descs = self._describe(items, "symbol")
            for s in symbols:
                lines.append(f"- `{s.name}` ({s.kind}, L{s.line_start}-L{s.line_end}): {_sanitize(descs[s.id])}")
            return "\n".join(lines) + "\n"

        return self.cache.get_or_create("file", file, key, build)

    def symbol_descriptions(self, file: str) -> dict[str, str]:
        """Symbol id -> description from the file's structure doc."""
        entries = self.file(file).symbol_entries()
        return {
            s.id: entries.get((s.name, s.kind, s.line_start), "")
            for s in self.file_symbols(file)
        }

    def folder_descriptions(self, folder: str) -> dict[str, str]:
        """File path -> description from the folder's structure doc."""
        by_name = dict(self.folder(folder).entries())
        return {f: by_name.get(PurePosixPath(f).name, "") for f in self.model.files_in(folder)}

    def repo_descriptions(self) -> dict[str, str]:
        return {("" if label == ROOT_LABEL else label): desc for label, desc in self.repository().entries()}

    def build_all(self) -> None:
        self.repository()
        for folder in self.model.folders:
            self.folder(folder)
        for f in self.model.files:
            self.file(f)


def generate_repo_structure_doc(model, provider, cache=None) -> StructureDoc:
    return StructureDocs(model, provider, cache).repository()


def generate_folder_structure_doc(folder, model, provider, cache=None) -> StructureDoc:
    return StructureDocs(model, provider, cache).folder(folder)


def generate_file_structure_doc(file, symbols, provider, cache=None, model=None) -> StructureDoc:
    if model is None:
        raise ValueError("model is required to read the file's source")
    model = model.with_symbols([s for s in model.symbols if s.file != file] + list(symbols))
    return StructureDocs(model, provider, cache).file(file)
