"""Dependency-free C/C++ symbol extractor.

Used when no tags stream is supplied. It is a lexer plus a file-scope
declaration recognizer, not a parser: the preprocessor is not evaluated and
anything inside function bodies is skipped by brace matching.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .model import CodeSymbol

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<comment>//[^\n]*|/\*.*?(?:\*/|\Z))
  | (?P<str>[LuU8]*"(?:\\.|[^"\\\n])*"?|[LuU8]*'(?:\\.|[^'\\\n])*'?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>\.?[0-9](?:[0-9A-Za-z_.]|[eEpP][+-])*)
  | (?P<ws>\s+)
  | (?P<punct>::|->|\+\+|--|<<=|>>=|[-+*/%&|^!=<>]=|&&|\|\||<<|>>|\#\#|.)
    """,
    re.VERBOSE | re.DOTALL,
)
_PP_START_RE = re.compile(r"[ \t]*#")
_DEFINE_RE = re.compile(r"#\s*define\s+([A-Za-z_][A-Za-z0-9_]*)")

_NOT_FUNCTION_NAMES = frozenset(
    "if while for switch return sizeof alignof decltype __attribute__ __declspec "
    "defined static_assert _Static_assert".split()
)
_TRANSPARENT_BLOCKS = ("extern", "namespace")
_STORAGE = frozenset("static extern inline const volatile register __inline __inline__".split())


@dataclass(frozen=True)
class Token:
    kind: str  # id | num | str | punct | pp | comment
    value: str
    line: int
    end_line: int
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    """Lex C source, folding each preprocessor directive into one ``pp`` token."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    at_line_start = True
    n = len(text)
    while pos < n:
        if at_line_start:
            m = _PP_START_RE.match(text, pos)
            if m:
                end = pos
                # directive runs to an unescaped newline; comments inside are kept
                while end < n:
                    nl = text.find("\n", end)
                    if nl == -1:
                        end = n
                        break
                    seg = text[pos:nl]
                    if seg.rstrip("\r").endswith("\\") or seg.count("/*") > seg.count("*/"):
                        end = nl + 1
                        continue
                    end = nl
                    break
                value = text[pos:end]
                nlines = value.count("\n")
                tokens.append(Token("pp", value.strip(), line, line + nlines, pos, end))
                line += nlines
                pos = end
                continue
        m = _TOKEN_RE.match(text, pos)
        kind = m.lastgroup
        value = m.group()
        nlines = value.count("\n")
        if kind != "ws":
            tokens.append(Token(kind, value, line, line + nlines, pos, m.end()))
            at_line_start = False
        if nlines:
            at_line_start = True
        elif kind == "ws" and value.endswith("\n"):
            at_line_start = True
        line += nlines
        pos = m.end()
    return tokens


def _match_close(code: list[Token], i: int, open_: str, close: str) -> int:
    """Index of the token closing ``code[i]``; -1 if unbalanced."""
    depth = 0
    for j in range(i, len(code)):
        v = code[j].value
        if code[j].kind != "punct":
            continue
        if v == open_:
            depth += 1
        elif v == close:
            depth -= 1
            if depth == 0:
                return j
    return -1


def _collapse(text: str) -> str:
    return " ".join(text.split())


def _declarator_name(toks: list[Token]) -> Token | None:
    """Name declared by a file-scope declaration's tokens (before ``;``/``=``)."""
    for k in range(len(toks) - 3):
        a, b, c, d = toks[k: k + 4]
        if a.value == "(" and b.value == "*" and c.kind == "id" and d.value in (")", "["):
            return c
    depth = 0
    last = None
    for t in toks:
        if t.value in ("[", "("):
            depth += 1
        elif t.value in ("]", ")"):
            depth -= 1
        elif depth == 0 and t.kind == "id":
            last = t
    return last


def _function_name(stmt: list[Token]) -> Token | None:
    depth = 0
    for k, t in enumerate(stmt):
        if t.value == "(":
            if depth == 0 and k > 0:
                prev = stmt[k - 1]
                if prev.kind == "id" and prev.value not in _NOT_FUNCTION_NAMES:
                    # a return type (or at least a qualifier) must precede the name
                    preceding = [p for p in stmt[: k - 1] if p.value != "::"]
                    return prev if preceding else None
                return None
            depth += 1
        elif t.value == ")":
            depth -= 1
    return None


def _has_top_level(toks: list[Token], value: str) -> bool:
    depth = 0
    for t in toks:
        if depth == 0 and t.value == value:
            return True
        if t.value in ("(", "["):
            depth += 1
        elif t.value in (")", "]"):
            depth -= 1
        elif depth == 0 and t.value == value:
            return True
    return False


def extract_symbols_builtin(file_path: str, text: str) -> list[CodeSymbol]:
    tokens = tokenize(text)
    code = [t for t in tokens if t.kind != "comment"]
    symbols: list[CodeSymbol] = []

    def add(name: str, kind: str, start: int, end: int, signature: str, **kw) -> None:
        symbols.append(CodeSymbol(file=file_path, line_start=start, name=name, kind=kind,
                                  line_end=max(end, start), signature=signature, **kw))

    def line_text(lineno: int) -> str:
        lines = text.splitlines()
        return lines[lineno - 1].strip() if 0 < lineno <= len(lines) else ""

    stmt: list[Token] = []
    i = 0
    while i < len(code):
        t = code[i]
        if t.kind == "pp":
            m = _DEFINE_RE.match(t.value)
            if m:
                first = t.value.split("\n", 1)[0].rstrip("\\").strip()
                add(m.group(1), "macro", t.line, t.end_line, _collapse(first))
            i += 1
            continue
        if t.value == "}" and t.kind == "punct":
            # closing brace of a transparent extern "C" / namespace block
            stmt = []
            i += 1
            continue
        if t.value == ";" and t.kind == "punct":
            _file_scope_declaration(stmt, t, add)
            stmt = []
            i += 1
            continue
        if t.value == "{" and t.kind == "punct":
            if stmt and stmt[0].value in _TRANSPARENT_BLOCKS and not _has_top_level(stmt, "("):
                stmt = []
                i += 1
                continue
            close = _match_close(code, i, "{", "}")
            unbalanced = close == -1
            if unbalanced:
                logger.warning("%s: unbalanced braces from line %d", file_path, t.line)
                close = len(code) - 1
            head = stmt
            keywords = [s.value for s in head if s.kind == "id"]
            if _has_top_level(stmt, "="):
                # initializer braces belong to a declaration ending at ';'
                stmt = stmt + code[i: close + 1]
                i = close + 1
                continue
            if keywords and (keywords[0] == "typedef"
                             or (_aggregate_keyword(head) and not _has_top_level(head, "("))):
                j = close + 1
                tail: list[Token] = []
                while j < len(code) and not (code[j].value == ";" and code[j].kind == "punct"):
                    tail.append(code[j])
                    j += 1
                end_tok = code[j] if j < len(code) else code[close]
                _aggregate(head, code[i: close + 1], tail, end_tok, file_path, add, line_text, unbalanced)
                stmt = []
                i = j + 1
                continue
            name = _function_name(stmt)
            if name is not None:
                start = stmt[0].line
                sig = _collapse(text[stmt[0].start: t.start])
                add(name.value, "function", start, code[close].end_line, sig, unbalanced=unbalanced)
            stmt = []
            i = close + 1
            continue
        stmt.append(t)
        i += 1
    return sorted(set(symbols))


def _aggregate_keyword(head: list[Token]) -> str | None:
    for tok in head:
        if tok.kind != "id":
            continue
        if tok.value in ("struct", "enum", "union", "class"):
            return tok.value
        if tok.value not in _STORAGE and tok.value != "typedef":
            return None
    return None


def _aggregate(head, body, tail, end_tok, file_path, add, line_text, unbalanced):
    is_typedef = any(t.value == "typedef" for t in head)
    agg = _aggregate_keyword(head)
    start = head[0].line
    end = end_tok.end_line
    tag = None
    if agg:
        idx = next(k for k, t in enumerate(head) if t.value == agg)
        rest = [t for t in head[idx + 1:] if t.kind == "id"]
        if rest:
            tag = rest[-1].value
    typedef_names = []
    if is_typedef:
        for group in _split_commas(tail):
            name = _declarator_name(group)
            if name is not None:
                typedef_names.append(name.value)
    label = tag or (typedef_names[0] if typedef_names else None)
    sig = line_text(start)
    if agg in ("struct", "class") and label:
        add(label, "struct", start, end, sig, unbalanced=unbalanced)
    elif agg == "enum":
        if label:
            add(label, "enum", start, end, sig, unbalanced=unbalanced)
        _enumerators(body, add, line_text)
    for name in typedef_names:
        add(name, "typedef", start, end, sig, unbalanced=unbalanced)
    if not is_typedef and agg is None:
        logger.debug("%s: unrecognized block at line %d", file_path, start)


def _split_commas(toks):
    groups, cur, depth = [], [], 0
    for t in toks:
        if t.value in ("(", "["):
            depth += 1
        elif t.value in (")", "]"):
            depth -= 1
        if t.value == "," and depth == 0:
            groups.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        groups.append(cur)
    return groups


def _enumerators(body, add, line_text):
    inner = body[1:-1] if len(body) >= 2 else []
    for group in _split_commas(inner):
        ids = [t for t in group if t.kind != "pp"]
        if ids and ids[0].kind == "id":
            tok = ids[0]
            add(tok.value, "constant", tok.line, tok.line, line_text(tok.line).rstrip(","))


def _file_scope_declaration(stmt, semi, add):
    if not stmt:
        return
    values = [t.value for t in stmt]
    if values[0] == "typedef":
        # body-less typedef: typedef int foo_t; typedef void (*cb_t)(int);
        for group in _split_commas(stmt[1:]):
            name = _declarator_name(group)
            if name is not None:
                add(name.value, "typedef", stmt[0].line, semi.end_line, _collapse(" ".join(values)) + ";")
        return
    if values[0] in ("using", "template", "friend"):
        return
    if _has_top_level(stmt, "="):
        if "const" in values[: values.index("=")] or "constexpr" in values:
            eq = values.index("=")
            name = _declarator_name(stmt[:eq])
            if name is not None:
                add(name.value, "constant", stmt[0].line, semi.end_line,
                    _collapse(" ".join(values[:eq])))
        return
    if _aggregate_keyword(stmt) and not _has_top_level(stmt, "("):
        return  # forward declaration or plain struct variable
    name = _function_name(stmt)
    if name is not None:
        add(name.value, "function", stmt[0].line, semi.end_line,
            _collapse(" ".join(values)) + ";", declaration=True)


def leading_comment(text: str, line: int) -> str:
    """Comment block immediately above ``line`` (1-based), stripped of markers."""
    lines = text.splitlines()
    k = line - 2
    block: list[str] = []
    in_block = False
    while k >= 0:
        raw = lines[k].strip()
        if in_block:
            block.append(raw)
            if raw.startswith("/*"):
                break
        elif raw.endswith("*/"):
            block.append(raw)
            if raw.startswith("/*"):
                break
            in_block = True
        elif raw.startswith("//"):
            block.append(raw)
        else:
            break
        k -= 1
    block.reverse()
    return _clean_comment("\n".join(block))


def header_comment(text: str) -> str:
    """First comment in the file, if it precedes any code."""
    for tok in tokenize(text):
        if tok.kind == "comment":
            return _clean_comment(tok.value)
        return ""
    return ""


def _clean_comment(raw: str) -> str:
    out = []
    for ln in raw.splitlines():
        ln = ln.strip()
        ln = re.sub(r"^(/\*+|//+|\*+/?)", "", ln)
        ln = re.sub(r"\*+/$", "", ln).strip()
        if ln:
            out.append(ln)
    return " ".join(out)


def first_sentence(text: str) -> str:
    m = re.match(r"(.+?[.!?])(\s|$)", text)
    return (m.group(1) if m else text).strip()
