"""Tokenizer for the supported Java subset.

Comments are dropped. Empty argument slots (``f(a, )``) get a zero-width
HOLE token so partial code stays parseable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

HOLE = "<HOLE>"

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized this
    throw throws transient try void volatile while var""".split()
)
LITERAL_WORDS = frozenset({"true", "false", "null"})
PRIMITIVES = frozenset({"boolean", "byte", "char", "short", "int", "long", "float", "double"})

# longest first
OPERATORS = [
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", ">", "<", "!", "~",
    "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
]
# ">>" and ">>>" are deliberately absent: generics close with consecutive '>'
# tokens and the expression parser reassembles shifts.

_NUMBER = re.compile(
    r"""(?:0[xX][0-9a-fA-F_]+[lL]?
        |0[bB][01_]+[lL]?
        |(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?)""",
    re.VERBOSE,
)
_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")


class ParseError(Exception):
    def __init__(self, message, line, col, path=None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.path = path


@dataclass(frozen=True)
class Token:
    text: str
    kind: str  # ident | keyword | literal kinds | op | hole
    line: int
    col: int

    @property
    def is_literal(self):
        return self.kind in ("string", "char", "number", "bool", "null")


def tokenize(source, path=None):
    tokens = []
    i, n = 0, len(source)
    line, col = 1, 1

    def advance(k):
        nonlocal i, line, col
        chunk = source[i:i + k]
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = k - chunk.rfind("\n")
        else:
            col += k
        i += k

    while i < n:
        c = source[i]
        if c in " \t\r\n\f":
            advance(1)
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            advance((n if j < 0 else j) - i)
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise ParseError("unterminated comment", line, col, path)
            advance(j + 2 - i)
            continue
        if c == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j < 0:
                    raise ParseError("unterminated text block", line, col, path)
                text = source[i:j + 3]
            else:
                text = _quoted(source, i, '"', line, col, path)
            tokens.append(Token(text, "string", line, col))
            advance(len(text))
            continue
        if c == "'":
            text = _quoted(source, i, "'", line, col, path)
            tokens.append(Token(text, "char", line, col))
            advance(len(text))
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER.match(source, i)
            tokens.append(Token(m.group(), "number", line, col))
            advance(m.end() - i)
            continue
        m = _IDENT.match(source, i)
        if m:
            word = m.group()
            if word in ("true", "false"):
                kind = "bool"
            elif word == "null":
                kind = "null"
            elif word in KEYWORDS:
                kind = "keyword"
            else:
                kind = "ident"
            tokens.append(Token(word, kind, line, col))
            advance(len(word))
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(op, "op", line, col))
                advance(len(op))
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col, path)
    return _insert_holes(tokens)


def _quoted(source, i, quote, line, col, path):
    j = i + 1
    n = len(source)
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return source[i:j + 1]
        if ch == "\n":
            break
        j += 1
    what = "string" if quote == '"' else "character"
    raise ParseError(f"unterminated {what} literal", line, col, path)


def _insert_holes(tokens):
    out = []
    for k, tok in enumerate(tokens):
        if tok.text in (",", ")") and tok.kind == "op" and out:
            prev = out[-1]
            if prev.kind == "op" and prev.text in ("(", ","):
                if tok.text == "," or prev.text == ",":
                    out.append(Token("", "hole", tok.line, tok.col))
        out.append(tok)
    return out


def check_balance(tokens, path=None):
    """Raise ParseError for the first unbalanced bracket."""
    pairs = {")": "(", "]": "[", "}": "{"}
    stack = []
    for tok in tokens:
        if tok.kind != "op":
            continue
        if tok.text in "([{":
            stack.append(tok)
        elif tok.text in pairs:
            if not stack or stack[-1].text != pairs[tok.text]:
                raise ParseError(f"unbalanced '{tok.text}'", tok.line, tok.col, path)
            stack.pop()
    if stack:
        tok = stack[-1]
        name = {"(": "parenthesis", "[": "bracket", "{": "brace"}[tok.text]
        raise ParseError(f"unbalanced {name} '{tok.text}'", tok.line, tok.col, path)


def strip_comments(source):
    """Source with comments removed (literals untouched)."""
    out = []
    i, n = 0, len(source)
    while i < n:
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
        elif source.startswith("/*", i):
            j = source.find("*/", i + 2)
            i = n if j < 0 else j + 2
            out.append(" ")
        elif source[i] in "\"'":
            q = source[i]
            j = i + 1
            while j < n and source[j] != q and source[j] != "\n":
                j += 2 if source[j] == "\\" else 1
            out.append(source[i:j + 1])
            i = j + 1
        else:
            out.append(source[i])
            i += 1
    return "".join(out)
