"""Block/scope tree with declared-variable records."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast as A


@dataclass(eq=False)
class Variable:
    name: str
    type: Optional[A.TypeRef]  # None for enum constants (typed by owner)
    kind: str  # local | param | field
    visible_from: int  # token index at which the name comes into scope
    line: int
    block: "ScopeBlock" = field(repr=False)
    static: bool = False
    owner: Optional[A.TypeDecl] = field(default=None, repr=False)  # fields only
    modifiers: frozenset = frozenset()
    init: Optional[A.Expr] = field(default=None, repr=False)


@dataclass(eq=False)
class ScopeBlock:
    kind: str  # outermost | class-body | method-body | statement-block
    start: int
    end: int
    parent: Optional["ScopeBlock"] = field(default=None, repr=False)
    children: list = field(default_factory=list, repr=False)
    variables: list = field(default_factory=list)
    method: Optional[A.MethodDecl] = field(default=None, repr=False)
    type_decl: Optional[A.TypeDecl] = field(default=None, repr=False)

    @property
    def depth(self):
        d, b = 0, self
        while b.parent is not None:
            d, b = d + 1, b.parent
        return d

    def contains(self, other):
        b = other
        while b is not None:
            if b is self:
                return True
            b = b.parent
        return False


def scope_distance(outer, inner):
    """Number of parent links from `inner` up to `outer`; None if not nested."""
    d, b = 0, inner
    while b is not None:
        if b is outer:
            return d
        d, b = d + 1, b.parent
    return None


class ScopeTree:
    def __init__(self, unit):
        self.unit = unit
        self.root = ScopeBlock("outermost", 0, len(unit.tokens))
        self.blocks = [self.root]
        self.method_blocks = {}  # id(MethodDecl) -> ScopeBlock
        self.class_blocks = {}  # id(TypeDecl) -> ScopeBlock
        for td in unit.types:
            self._type(td, self.root)

    # ---------------------------------------------------------------- build
    def _new(self, kind, start, end, parent, **kw):
        b = ScopeBlock(kind, start, end, parent, **kw)
        parent.children.append(b)
        self.blocks.append(b)
        return b

    def _line(self, idx):
        toks = self.unit.tokens
        return toks[min(idx, len(toks) - 1)].line if toks else 1

    def _type(self, td, parent):
        cb = self._new("class-body", td.body_start, td.body_end, parent, type_decl=td)
        self.class_blocks[id(td)] = cb
        for const in td.enum_constants:
            cb.variables.append(Variable(const.name, A.TypeRef(td.qualified_name), "field",
                                         td.body_start, self._line(const.start), cb,
                                         static=True, owner=td,
                                         modifiers=frozenset({"public", "static", "final"})))
        for fd in td.fields:
            static = "static" in fd.modifiers or td.kind == "interface"
            for d in fd.declarators:
                ty = _with_dims(fd.type, d.dims)
                cb.variables.append(Variable(d.name, ty, "field", td.body_start,
                                             self._line(d.start), cb, static=static, owner=td,
                                             modifiers=fd.modifiers, init=d.init))
        for m in td.methods:
            if m.body is None:
                continue
            mb = self._new("method-body", m.body.start, m.body.end, cb, method=m, type_decl=td)
            self.method_blocks[id(m)] = mb
            for p in m.params:
                mb.variables.append(Variable(p.name, p.type, "param", m.body.start,
                                             self._line(p.start), mb))
            self._stmts(m.body.stmts, mb)
        for inner in td.types:
            self._type(inner, cb)

    def _declare(self, block, decl, ty):
        for d in decl.declarators:
            block.variables.append(Variable(d.name, _with_dims(ty, d.dims), "local", d.end,
                                            self._line(d.start), block, init=d.init))

    def _stmts(self, stmts, block):
        for s in stmts:
            self._stmt(s, block)

    def _stmt(self, s, block):
        if isinstance(s, A.Block):
            b = self._new("statement-block", s.start, s.end, block)
            self._stmts(s.stmts, b)
        elif isinstance(s, A.LocalVar):
            self._declare(block, s, s.type)
        elif isinstance(s, A.If):
            self._stmt(s.then, block)
            if s.other is not None:
                self._stmt(s.other, block)
        elif isinstance(s, A.For):
            b = self._new("statement-block", s.start, s.end, block)
            for init in s.init:
                if isinstance(init, A.LocalVar):
                    self._declare(b, init, init.type)
            self._body(s.body, b)
        elif isinstance(s, A.ForEach):
            b = self._new("statement-block", s.start, s.end, block)
            b.variables.append(Variable(s.var.name, s.var_type, "local", s.var.end,
                                        self._line(s.var.start), b))
            self._body(s.body, b)
        elif isinstance(s, (A.While, A.DoWhile)):
            self._stmt(s.body, block)
        elif isinstance(s, A.Try):
            if s.resources:
                b = self._new("statement-block", s.start, s.body.end, block)
                for r in s.resources:
                    self._declare(b, r, r.type)
                self._body(s.body, b)
            else:
                self._stmt(s.body, block)
            for c in s.catches:
                cb = self._new("statement-block", c.start, c.end, block)
                ty = c.types[0] if len(c.types) == 1 else A.TypeRef("java.lang.Throwable")
                cb.variables.append(Variable(c.var.name, ty, "local", c.var.end,
                                             self._line(c.var.start), cb))
                self._body(c.body, cb)
            if s.final is not None:
                self._stmt(s.final, block)
        elif isinstance(s, A.Sync):
            self._stmt(s.body, block)

    def _body(self, body, block):
        """Body statement merged into an already-created header block."""
        if isinstance(body, A.Block):
            self._stmts(body.stmts, block)
        elif body is not None:
            self._stmt(body, block)

    # ---------------------------------------------------------------- queries
    def innermost(self, pos):
        b = self.root
        while True:
            for c in b.children:
                if c.start <= pos < c.end:
                    b = c
                    break
            else:
                return b

    def method_block(self, pos):
        b = self.innermost(pos)
        while b is not None and b.kind != "method-body":
            b = b.parent
        return b

    def class_block(self, pos):
        b = self.innermost(pos)
        while b is not None and b.kind != "class-body":
            b = b.parent
        return b

    def enclosing_method(self, pos):
        b = self.method_block(pos)
        return b.method if b is not None else None

    def enclosing_type(self, pos):
        b = self.class_block(pos)
        return b.type_decl if b is not None else None

    def visible(self, pos):
        """Variables in scope at token index `pos`, innermost declaration first per name."""
        seen = {}
        b = self.innermost(pos)
        while b is not None:
            for v in b.variables:
                if v.kind == "field" or v.visible_from <= pos:
                    seen.setdefault(v.name, v)
            b = b.parent
        return seen

    def block_of(self, variable):
        return variable.block


def _with_dims(ty, dims):
    if not dims:
        return ty
    return A.TypeRef(ty.name, ty.args, ty.dims + dims, start=ty.start, end=ty.end)


def build_scope_tree(unit):
    return ScopeTree(unit)
