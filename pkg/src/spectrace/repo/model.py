"""Repository model: folders, files and code symbols."""

from __future__ import annotations

import fnmatch
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path, PurePosixPath

from ..errors import PermissionDenied, RootNotFound

SYMBOL_KINDS = ("function", "macro", "struct", "constant", "enum", "typedef")
DEFAULT_EXTENSIONS = (".c", ".h", ".cc", ".cpp", ".cxx", ".hh", ".hpp", ".hxx")
DEFAULT_EXCLUDES = ("**/build/**", "**/.git/**")


@dataclass(frozen=True, order=True)
class CodeSymbol:
    file: str
    line_start: int
    name: str
    kind: str
    line_end: int = 0
    signature: str = ""
    declaration: bool = False
    unbalanced: bool = False

    def __post_init__(self):
        if self.kind not in SYMBOL_KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.line_end == 0:
            object.__setattr__(self, "line_end", self.line_start)
        if not (1 <= self.line_start <= self.line_end):
            raise ValueError(f"bad line range {self.line_start}-{self.line_end} for {self.name}")

    @property
    def id(self) -> str:
        return f"{self.file}:{self.line_start}:{self.kind}:{self.name}"

    @property
    def key(self) -> tuple[str, str, str, int]:
        return (self.name, self.kind, self.file, self.line_start)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "kind": self.kind,
            "file": self.file,
            "line_start": self.line_start,
            "line_end": self.line_end,
            "signature": self.signature,
        }
        if self.declaration:
            d["declaration"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSymbol":
        return cls(
            file=d["file"], line_start=d["line_start"], name=d["name"], kind=d["kind"],
            line_end=d.get("line_end", d["line_start"]), signature=d.get("signature", ""),
            declaration=d.get("declaration", False),
        )


def normalize_path(path: str) -> str:
    """Repo-relative POSIX path without '.', '..' or trailing separators."""
    parts: list[str] = []
    for part in PurePosixPath(path.replace("\\", "/")).parts:
        if part in ("", ".") or not part.strip("/"):
            continue
        if part == "..":
            if parts:
                parts.pop()
            continue
        parts.append(part)
    return "/".join(parts)


def parent_folder(path: str) -> str:
    return path.rsplit("/", 1)[0] if "/" in path else ""


def is_under(path: str, folder: str) -> bool:
    return folder == "" or path == folder or path.startswith(folder + "/")


def is_proper_ancestor(folder: str, other: str) -> bool:
    return folder != other and is_under(other, folder)


@dataclass
class RepoModel:
    root: str
    folders: list[str]
    files: list[str]
    symbols: list[CodeSymbol] = field(default_factory=list)

    @cached_property
    def _by_file(self) -> dict[str, list[CodeSymbol]]:
        out: dict[str, list[CodeSymbol]] = {f: [] for f in self.files}
        for s in self.symbols:
            out.setdefault(s.file, []).append(s)
        return out

    @property
    def symbol_by_file(self) -> dict[str, list[CodeSymbol]]:
        return self._by_file

    def with_symbols(self, symbols: list[CodeSymbol]) -> "RepoModel":
        unique: dict[tuple, CodeSymbol] = {}
        for s in symbols:
            unique.setdefault(s.key, s)
        return RepoModel(self.root, list(self.folders), list(self.files), sorted(unique.values()))

    def files_in(self, folder: str, recursive: bool = False) -> list[str]:
        if recursive:
            return [f for f in self.files if is_under(f, folder)]
        return [f for f in self.files if parent_folder(f) == folder]

    def subfolders(self, folder: str) -> list[str]:
        return [d for d in self.folders if d != folder and is_under(d, folder)]

    def read_text(self, file: str) -> str:
        return (Path(self.root) / file).read_text(encoding="utf-8", errors="replace")

    def read_bytes(self, file: str) -> bytes:
        return (Path(self.root) / file).read_bytes()

    def __contains__(self, file: str) -> bool:
        return file in self._file_set

    @cached_property
    def _file_set(self) -> frozenset[str]:
        return frozenset(self.files)


def _excluded(rel: str, patterns, is_dir: bool) -> bool:
    probe = rel + "/" if is_dir else rel
    for pat in patterns:
        if fnmatch.fnmatchcase(probe, pat) or fnmatch.fnmatchcase("/" + probe, pat):
            return True
        # "**/x/**" should also hit a top-level "x/"
        if pat.startswith("**/") and fnmatch.fnmatchcase(probe, pat[3:]):
            return True
    return False


def scan_repository(
    root: str | Path,
    include_extensions=DEFAULT_EXTENSIONS,
    exclude_globs=DEFAULT_EXCLUDES,
) -> RepoModel:
    root = Path(root)
    if not root.is_dir():
        raise RootNotFound(str(root))
    if not os.access(root, os.R_OK | os.X_OK):
        raise PermissionDenied(str(root))
    exts = {e.lower() for e in include_extensions}
    folders = {""}
    files: list[str] = []

    def onerror(err: OSError):
        raise PermissionDenied(str(err)) from err

    for dirpath, dirnames, filenames in os.walk(root, onerror=onerror):
        rel_dir = normalize_path(os.path.relpath(dirpath, root))
        kept = []
        for d in sorted(dirnames):
            rel = normalize_path(f"{rel_dir}/{d}")
            if d.startswith(".") or _excluded(rel, exclude_globs, True):
                continue
            kept.append(d)
        dirnames[:] = kept
        for name in sorted(filenames):
            rel = normalize_path(f"{rel_dir}/{name}")
            if Path(name).suffix.lower() not in exts or _excluded(rel, exclude_globs, False):
                continue
            files.append(rel)
            parent = parent_folder(rel)
            while True:
                folders.add(parent)
                if parent == "":
                    break
                parent = parent_folder(parent)
    return RepoModel(root=str(root.resolve()), folders=sorted(folders), files=sorted(files))
