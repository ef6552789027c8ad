"""Tolerant Java lexer.

Tolerant means total: any input produces a token stream. Unknown
characters become single-character operator tokens and unterminated
literals or comments run to end of input, so text-level normalization
can reuse the lexer on arbitrary content while the parser applies its
own strictness on top.

One deliberate quirk: ``>`` is always emitted as a solo token. Nested
generic types close with ``>>``, which must split into two tokens; the
parser re-joins adjacent ``>`` runs into shift and compound-assignment
operators where expressions need them. The ``<`` family stays merged
because no legal type position contains ``<<`` or ``<=``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Reserved words. Contextual keywords (var, record, sealed, permits,
# yield, ...) lex as identifiers and are recognized by the parser.
KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double"}
)

# Longest-match operator table. No ">"-initial multi-char entries: see
# the module docstring.
_OPERATORS = [
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "<<", "<=",
    "==", "!=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "?", ":", ";",
    ",", ".", "(", ")", "{", "}", "[", "]", "@", "&", "|", "^",
]
_OP3 = {op for op in _OPERATORS if len(op) == 3}
_OP2 = {op for op in _OPERATORS if len(op) == 2}

_DIGITS = set("0123456789")

_NUM_RE = re.compile(
    r"""
    0[xX][0-9a-fA-F_]+(?:\.[0-9a-fA-F_]*)?(?:[pP][+-]?[0-9_]+)?[fFdDlL]?
    | 0[bB][01_]+[lL]?
    | (?:\d[\d_]*\.[\d_]*|\.\d[\d_]*|\d[\d_]*)(?:[eE][+-]?[0-9_]+)?[fFdDlL]?
    """,
    re.VERBOSE,
)
_FLOAT_MARK = re.compile(r"[.eEfFdD]|0[xX].*[pP]")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # ident kw int float char str textblock op comment eof
    text: str
    line: int  # 1-based
    col: int  # 1-based
    start: int  # char offset into the source
    end: int

    def __repr__(self) -> str:  # compact for parser error messages
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def lex(text: str, keep_comments: bool = False) -> list[Token]:
    """Tokenize `text`, appending a final eof token."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    line_start = 0  # offset of the first char of the current line

    def make(kind: str, start: int, end: int, tok_line: int, tok_col: int) -> None:
        tokens.append(Token(kind, text[start:end], tok_line, tok_col, start, end))

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch in " \t\r\f\x0b":
            i += 1
            continue

        start = i
        tok_line = line
        tok_col = i - line_start + 1

        # Comments
        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                j = text.find("\n", i)
                if j == -1:
                    j = n
                if keep_comments:
                    make("comment", i, j, tok_line, tok_col)
                i = j
                continue
            if nxt == "*":
                j = text.find("*/", i + 2)
                end = n if j == -1 else j + 2
                if keep_comments:
                    make("comment", i, end, tok_line, tok_col)
                line += text.count("\n", i, end)
                nl = text.rfind("\n", i, end)
                if nl != -1:
                    line_start = nl + 1
                i = end
                continue

        # Text blocks and string literals
        if ch == '"':
            if text.startswith('"""', i):
                j = text.find('"""', i + 3)
                end = n if j == -1 else j + 3
                make("textblock", i, end, tok_line, tok_col)
                line += text.count("\n", i, end)
                nl = text.rfind("\n", i, end)
                if nl != -1:
                    line_start = nl + 1
                i = end
                continue
            j = i + 1
            while j < n:
                c = text[j]
                if c == "\\" and j + 1 < n:
                    j += 2
                    continue
                if c == '"' or c == "\n":
                    break
                j += 1
            end = j + 1 if j < n and text[j] == '"' else min(j, n)
            make("str", i, end, tok_line, tok_col)
            i = end
            continue

        # Char literals
        if ch == "'":
            j = i + 1
            while j < n:
                c = text[j]
                if c == "\\" and j + 1 < n:
                    j += 2
                    continue
                if c == "'" or c == "\n":
                    break
                j += 1
            end = j + 1 if j < n and text[j] == "'" else min(j, n)
            make("char", i, end, tok_line, tok_col)
            i = end
            continue

        # Numeric literals; also ".5" floats
        if ch in _DIGITS or (ch == "." and i + 1 < n and text[i + 1] in _DIGITS):
            match = _NUM_RE.match(text, i)
            assert match is not None  # first char guarantees a match
            j = match.end()
            body = text[i:j]
            hex_like = body[:2].lower() in ("0x", "0b")
            if not hex_like and _FLOAT_MARK.search(body):
                make("float", i, j, tok_line, tok_col)
            elif hex_like and body[:2].lower() == "0x" and ("p" in body.lower() or "." in body):
                make("float", i, j, tok_line, tok_col)
            else:
                make("int", i, j, tok_line, tok_col)
            i = j
            continue

        # Identifiers and keywords
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_part(text[j]):
                j += 1
            word = text[i:j]
            make("kw" if word in KEYWORDS else "ident", i, j, tok_line, tok_col)
            i = j
            continue

        # Operators, longest match first; anything unknown is a 1-char op
        three = text[i : i + 3]
        if three in _OP3:
            make("op", i, i + 3, tok_line, tok_col)
            i += 3
            continue
        two = text[i : i + 2]
        if two in _OP2:
            make("op", i, i + 2, tok_line, tok_col)
            i += 2
            continue
        make("op", i, i + 1, tok_line, tok_col)
        i += 1

    tokens.append(Token("eof", "", line, n - line_start + 1, n, n))
    return tokens
