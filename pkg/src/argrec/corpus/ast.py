"""Syntax tree for the Java subset.

Every node carries ``start``/``end`` token indices (half-open) into the
unit's token stream; line/column spans are derived from those tokens.
Expression nodes double as candidate trees, so they must be constructible
without a backing token stream (indices default to -1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class ExprType(str, Enum):
    SimpleName = "SimpleName"
    QualifiedName = "QualifiedName"
    FieldAccess = "FieldAccess"
    MethodInvocation = "MethodInvocation"
    StringLiteral = "StringLiteral"
    NumberLiteral = "NumberLiteral"
    BooleanLiteral = "BooleanLiteral"
    CharacterLiteral = "CharacterLiteral"
    NullLiteral = "NullLiteral"
    TypeLiteral = "TypeLiteral"
    ThisExpr = "ThisExpr"
    CastExpr = "CastExpr"
    ObjectCreation = "ObjectCreation"
    ArrayCreation = "ArrayCreation"
    ArrayAccess = "ArrayAccess"
    LambdaExpr = "LambdaExpr"
    CompoundExpr = "CompoundExpr"

    @property
    def supported(self):
        return self not in (ExprType.LambdaExpr, ExprType.CompoundExpr)


SUPPORTED_TYPES = tuple(t for t in ExprType if t.supported)
LITERAL_TYPES = frozenset({
    ExprType.StringLiteral, ExprType.NumberLiteral, ExprType.BooleanLiteral,
    ExprType.CharacterLiteral, ExprType.NullLiteral,
})


@dataclass
class Node:
    start: int = field(default=-1, kw_only=True)
    end: int = field(default=-1, kw_only=True)


@dataclass
class TypeRef(Node):
    name: str  # as written, possibly dotted
    args: list = field(default_factory=list)  # list[TypeRef]
    dims: int = 0
    varargs: bool = False

    @property
    def simple(self):
        return self.name.rsplit(".", 1)[-1]

    def text(self):
        s = self.name
        if self.args:
            s += "<" + ",".join(a.text() for a in self.args) + ">"
        return s + "[]" * self.dims


# ---------------------------------------------------------------- expressions

@dataclass
class Expr(Node):
    pass


@dataclass
class Name(Expr):
    ident: str


@dataclass
class Select(Expr):
    """``target.name`` -- field access or qualified name."""
    target: Expr
    ident: str


@dataclass
class Call(Expr):
    target: Optional[Expr]  # None for unqualified calls
    ident: str
    args: list = field(default_factory=list)


@dataclass
class New(Expr):
    type: TypeRef
    args: list = field(default_factory=list)
    anonymous_body: bool = False


@dataclass
class NewArray(Expr):
    type: TypeRef  # element type (dims excluded)
    dims: list = field(default_factory=list)  # dimension expressions (may hold Hole)
    extra_dims: int = 0
    init: Optional[list] = None


@dataclass
class Index(Expr):
    target: Expr
    index: Expr


@dataclass
class Literal(Expr):
    kind: str  # string | char | number | bool | null
    text: str


@dataclass
class This(Expr):
    qualifier: Optional[str] = None


@dataclass
class Super(Expr):
    pass


@dataclass
class ClassLit(Expr):
    type: TypeRef


@dataclass
class Cast(Expr):
    type: TypeRef
    operand: Expr


@dataclass
class Hole(Expr):
    pass


@dataclass
class Unary(Expr):
    op: str
    operand: Expr
    postfix: bool = False


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Conditional(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class Assign(Expr):
    op: str
    target: Expr
    value: Expr


@dataclass
class InstanceOf(Expr):
    operand: Expr
    type: TypeRef


@dataclass
class Paren(Expr):
    inner: Expr


@dataclass
class ArrayInit(Expr):
    items: list = field(default_factory=list)


@dataclass
class Opaque(Expr):
    """Lambda, method reference, switch expression: kept as a span only."""
    what: str = "lambda"


# ---------------------------------------------------------------- statements

@dataclass
class Stmt(Node):
    pass


@dataclass
class Block(Stmt):
    stmts: list = field(default_factory=list)


@dataclass
class VarDeclarator(Node):
    name: str
    dims: int = 0
    init: Optional[Expr] = None


@dataclass
class LocalVar(Stmt):
    type: TypeRef
    declarators: list = field(default_factory=list)


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    other: Optional[Stmt] = None


@dataclass
class For(Stmt):
    init: list = field(default_factory=list)  # LocalVar or ExprStmt
    cond: Optional[Expr] = None
    update: list = field(default_factory=list)
    body: Optional[Stmt] = None


@dataclass
class ForEach(Stmt):
    var_type: TypeRef
    var: VarDeclarator
    iterable: Expr
    body: Stmt


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class DoWhile(Stmt):
    body: Stmt
    cond: Expr


@dataclass
class Catch(Node):
    types: list  # list[TypeRef]
    var: VarDeclarator
    body: Block


@dataclass
class Try(Stmt):
    resources: list = field(default_factory=list)  # LocalVar
    body: Optional[Block] = None
    catches: list = field(default_factory=list)
    final: Optional[Block] = None


@dataclass
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass
class Throw(Stmt):
    value: Expr


@dataclass
class Jump(Stmt):
    keyword: str  # break | continue


@dataclass
class Sync(Stmt):
    lock: Expr
    body: Block


@dataclass
class Empty(Stmt):
    pass


@dataclass
class OpaqueStmt(Stmt):
    what: str = "unsupported"


# ---------------------------------------------------------------- declarations

@dataclass
class Param(Node):
    type: TypeRef
    name: str


@dataclass
class FieldDecl(Node):
    modifiers: frozenset
    type: TypeRef
    declarators: list = field(default_factory=list)


@dataclass
class MethodDecl(Node):
    modifiers: frozenset
    name: str  # "<init>" for constructors, "<clinit>"/"<block>" for initializers
    return_type: Optional[TypeRef]
    params: list = field(default_factory=list)
    type_params: list = field(default_factory=list)
    body: Optional[Block] = None

    @property
    def is_constructor(self):
        return self.name == "<init>"

    @property
    def is_static(self):
        return "static" in self.modifiers


@dataclass
class TypeDecl(Node):
    kind: str  # class | interface | enum
    name: str
    modifiers: frozenset = frozenset()
    type_params: list = field(default_factory=list)
    extends: list = field(default_factory=list)  # list[TypeRef]
    implements: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    types: list = field(default_factory=list)
    enum_constants: list = field(default_factory=list)  # list[VarDeclarator]
    body_start: int = -1
    body_end: int = -1
    outer: Optional["TypeDecl"] = field(default=None, repr=False, compare=False)
    qualified_name: str = ""


@dataclass
class CompilationUnit:
    path: str
    package: str
    imports: list  # list[(qualified name, static, on_demand)]
    types: list  # top-level TypeDecl
    tokens: list
    source: str = ""
    opaque: list = field(default_factory=list)  # Opaque / OpaqueStmt nodes
    project: str = ""

    def span(self, node):
        """(start line, start col, end line, end col) of a node."""
        first = self.tokens[node.start]
        last = self.tokens[node.end - 1]
        return first.line, first.col, last.line, last.col + len(last.text)

    def all_types(self):
        out = []
        stack = list(reversed(self.types))
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(t.types))
        return out


def children(node):
    """Direct child nodes of an AST node (statements, expressions, declarations)."""
    out = []
    for name in node.__dataclass_fields__:
        if name in ("outer",):
            continue
        value = getattr(node, name)
        if isinstance(value, Node):
            out.append(value)
        elif isinstance(value, list):
            out.extend(v for v in value if isinstance(v, Node))
    return out


def walk(node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))
