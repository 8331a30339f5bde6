"""Argument-recommendation requests: one per argument slot of every call."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast as A
from .exprs import classify, render


@dataclass(eq=False)
class ArRequest:
    unit: A.CompilationUnit = field(repr=False)
    call: A.Expr = field(repr=False)  # Call or New
    callee: str  # method name, or "<init>" for constructors
    pos: int  # 1-based argument index
    offset: int  # token index where the argument starts (the context ends here)
    callee_index: int  # token index of the callee name
    line: int
    col: int
    method: Optional[A.MethodDecl] = field(default=None, repr=False)
    type_decl: Optional[A.TypeDecl] = field(default=None, repr=False)
    gold_node: Optional[A.Expr] = field(default=None, repr=False)
    gold_text: Optional[str] = None
    gold_type: Optional[A.ExprType] = None
    unresolved: bool = False
    varargs: bool = False
    reason: str = ""
    expected: object = field(default=None, repr=False)  # ExpectedSet, filled on extraction

    @property
    def receiver(self):
        return self.call.target if isinstance(self.call, A.Call) else None

    @property
    def supported(self):
        return (not self.unresolved and self.gold_type is not None
                and self.gold_type.supported)

    @property
    def key(self):
        return f"{self.unit.path}:{self.line}:{self.col}:{self.callee}:{self.pos}"

    @property
    def call_line(self):
        return self.unit.tokens[self.callee_index].line


def find_calls(unit):
    """(call node, enclosing TypeDecl, enclosing MethodDecl or None) in source order."""
    out = []

    def visit(node, td, m):
        for n in A.walk(node):
            if isinstance(n, (A.Call, A.New)) and n.args:
                out.append((n, td, m))

    for td in unit.all_types():
        for fd in td.fields:
            for d in fd.declarators:
                if d.init is not None:
                    visit(d.init, td, None)
        for m in td.methods:
            if m.body is not None:
                visit(m.body, td, m)
    out.sort(key=lambda x: (x[0].start, x[0].end))
    return out


def source_slice(unit, start, end):
    if start >= end or not unit.source:
        return " ".join(t.text for t in unit.tokens[start:end])
    lines = unit.source.splitlines(keepends=True)
    offs = [0]
    for ln in lines:
        offs.append(offs[-1] + len(ln))
    first, last = unit.tokens[start], unit.tokens[end - 1]
    a = offs[first.line - 1] + first.col - 1
    b = offs[last.line - 1] + last.col - 1 + len(last.text)
    return unit.source[a:b]


def _paren_index(call):
    first = call.args[0]
    return first.start - 1


def extract_requests(unit, index=None, ctx=None, strict=False):
    """One ArRequest per argument of every call with at least one argument.

    With a type index the request is resolved (expected types computed);
    callees that cannot be resolved are kept and flagged ``unresolved``.
    """
    if ctx is None and index is not None:
        from ..typesys.resolve import UnitContext
        ctx = UnitContext(unit, index, strict)
    out = []
    for call, td, m in find_calls(unit):
        paren = _paren_index(call)
        callee = call.ident if isinstance(call, A.Call) else "<init>"
        for i, arg in enumerate(call.args):
            tok = unit.tokens[arg.start] if arg.start < len(unit.tokens) else unit.tokens[-1]
            r = ArRequest(unit, call, callee, i + 1, arg.start, paren - 1, tok.line, tok.col,
                          m, td)
            if not isinstance(arg, A.Hole):
                r.gold_node = arg
                r.gold_text = source_slice(unit, arg.start, arg.end)
                r.gold_type = classify(arg)
            if ctx is not None:
                resolve_request(r, ctx)
            out.append(r)
    return out


def resolve_request(r, ctx):
    ex = ctx.expected_types(r.call, r.pos, r.offset)
    r.expected = ex
    r.unresolved = not ex.resolved
    r.reason = ex.reason
    r.varargs = any(e.varargs for e in ex.entries)
    return r


def canonical_gold(r):
    return render(r.gold_node) if r.gold_node is not None else None
