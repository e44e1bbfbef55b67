"""Tokenizers, stopwords and hashing helpers shared across the package."""

from __future__ import annotations

import math
import re
from collections.abc import Iterable

STOPWORDS = frozenset(
    """
    a about above after again against all also am an and any are as at be
    because been before being below between both but by can could did do does
    doing down during each either few for from further had has have having he
    her here hers herself him himself his how however i if in into is it its
    itself just least less may me might more most much must my myself no nor
    not of off on once only or other our ours ourselves out over own per same
    shall she should so some such than that the their theirs them themselves
    then there these they this those through thus to too under until up upon
    us very via was we were what when where whether which while who whom why
    will with within without would you your yours yourself yourselves one two
    used use using within whose
    """.split()
)

_WORD_RE = re.compile(r"[A-Za-z0-9_]+(?:-[A-Za-z0-9_]+)*")
_IDENT_RE = re.compile(r"[A-Za-z0-9_]+")
_LOWER_UPPER = re.compile(r"([a-z][0-9]*)([A-Z])")
_ACRO_WORD = re.compile(r"([A-Z0-9])([A-Z][a-z])")
_ACRONYM_RE = re.compile(r"^[A-Z][A-Z0-9]+$")

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def words(text: str) -> list[str]:
    """Raw word-ish tokens (identifiers and hyphenated terms), original case."""
    return _WORD_RE.findall(text)


def split_identifier(token: str) -> list[str]:
    """Split snake_case / camelCase / hyphenated tokens into lowercase parts.

    >>> split_identifier("phTmlNfc_I2COpen")
    ['ph', 'tml', 'nfc', 'i2c', 'open']
    """
    parts: list[str] = []
    for chunk in re.split(r"[_\-]+", token):
        if not chunk:
            continue
        spaced = _ACRO_WORD.sub(r"\1 \2", _LOWER_UPPER.sub(r"\1 \2", chunk))
        parts.extend(p.lower() for p in spaced.split())
    return parts


def is_acronym(token: str) -> bool:
    return bool(_ACRONYM_RE.match(token))


def is_identifier_like(token: str) -> bool:
    if "_" in token.strip("_"):
        return True
    # camelCase: a lowercase letter followed somewhere by an uppercase one
    return bool(re.search(r"[a-z][A-Z]", token))


def term_set(text_or_terms: str | Iterable[str]) -> set[str]:
    """Normalized content-term set: lowercase identifier parts minus stopwords."""
    if isinstance(text_or_terms, str):
        tokens = words(text_or_terms)
    else:
        tokens = [w for t in text_or_terms for w in words(t)]
    out: set[str] = set()
    for tok in tokens:
        for part in split_identifier(tok):
            if part not in STOPWORDS and len(part) > 1:
                out.add(part)
    return out


def jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def code_tokens(text: str) -> list[str]:
    """Tokenization used by the keyword indices.

    Lowercase, split on non-alphanumerics but keep identifiers whole; compound
    identifiers additionally contribute their snake/camel parts.
    """
    out: list[str] = []
    for tok in _IDENT_RE.findall(text):
        low = tok.lower().strip("_")
        if not low:
            continue
        parts = split_identifier(tok)
        if len(parts) > 1:
            out.append(low)
            out.extend(p for p in parts if p not in STOPWORDS)
        elif low not in STOPWORDS:
            out.append(low)
    return out


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text) / 4)


def fnv1a64(data: bytes, seed: int = FNV64_OFFSET) -> int:
    h = seed
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK64
    return h


def combine_fingerprints(parts: Iterable[int]) -> int:
    """Order-sensitive pairwise combination of 64-bit fingerprints."""
    h = FNV64_OFFSET
    for p in parts:
        h = fnv1a64(p.to_bytes(8, "little"), h)
    return h
