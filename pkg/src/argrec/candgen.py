"""Valid argument candidates: accessible, type-compatible expressions over
the supported expression-type grammar, with nested slots left as holes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .corpus import ast as A
from .corpus.ast import ExprType
from .corpus.exprs import classify, count_holes, placeholder_shape, render
from .typesys.compat import WIDENS_TO, is_compatible
from .typesys.index import NULL_TYPE, OBJECT, PRIMITIVES, STRING, split_array
from .typesys.resolve import AccessibleVar

EMPTY_STRING = '"<EMPTY_STRING>"'
# first compatible one wins
NUMBER_DEFAULTS = (("0", "int"), ("0L", "long"), ("0.0f", "float"), ("0.0", "double"))
TYPE_ORDER = {t: i for i, t in enumerate(ExprType)}


@dataclass(eq=False)
class Candidate:
    expr_type: ExprType
    tree: A.Expr = field(repr=False)
    rendered: str
    result_type: str
    base: str  # provenance: "local:x", "field:p.A.f", "static:p.C.X", "literal", ...
    is_variable: bool = False
    holes: int = 0
    variable: Optional[AccessibleVar] = field(default=None, repr=False)
    member: object = field(default=None, repr=False)  # MemberSig behind the candidate
    owner_type: Optional[str] = None  # type whose member the candidate accesses
    static_member: bool = False  # derived from a static field or method
    names: tuple = ()  # identifiers of the rendered chain (for sub-token features)

    @property
    def key(self):
        return (self.rendered, self.holes)

    def to_json(self):
        return {"rendered": self.rendered, "exprType": self.expr_type.value,
                "resultType": self.result_type}


def render_candidate(c):
    return c.rendered


def make_candidate(tree, result_type, base, **kw):
    et = classify(tree)
    c = Candidate(et, tree, render(tree), result_type, base, holes=count_holes(tree), **kw)
    c.names = _chain_names(tree)
    return c


def _chain_names(tree):
    """Identifiers in reading order (receiver first)."""
    if isinstance(tree, A.Name):
        return (tree.ident,)
    if isinstance(tree, A.Select):
        return _chain_names(tree.target) + (tree.ident,)
    if isinstance(tree, A.Call):
        head = _chain_names(tree.target) if tree.target is not None else ()
        return head + (tree.ident,)
    if isinstance(tree, (A.New, A.NewArray, A.ClassLit)):
        return (tree.type.name.rsplit(".", 1)[-1],)
    if isinstance(tree, A.Cast):
        return _chain_names(tree.operand)
    if isinstance(tree, A.Index):
        return _chain_names(tree.target)
    if isinstance(tree, A.This):
        return ()
    return ()


def placeholderize(partial, result_type, base="", **kw):
    """Empty the outermost argument slots, array dims or index of `partial`."""
    shape = placeholder_shape(partial)
    if shape is None:
        raise ValueError(f"cannot placeholderize {type(partial).__name__}")
    return make_candidate(shape, result_type, base, **kw)


class Generator:
    """Enumerates candidates for one request location."""

    def __init__(self, ctx, pos, acc, expected, depth=1):
        self.ctx = ctx
        self.index = ctx.index
        self.strict = ctx.strict
        self.pos = pos
        self.acc = acc
        self.expected = list(expected.types if hasattr(expected, "types") else expected)
        self.depth = depth
        self.out = {}
        self._compat_cache = {}

    # ------------------------------------------------------------ helpers
    def compat(self, t):
        hit = self._compat_cache.get(t)
        if hit is None:
            hit = any(is_compatible(t, e, self.index, self.strict) for e in self.expected)
            self._compat_cache[t] = hit
        return hit

    def type_name(self, q):
        """Shortest name that denotes type `q` at the request location."""
        base, dims = split_array(q)
        if base in PRIMITIVES:
            return q
        td = self.ctx.enclosing_type(self.pos)
        e = self.index.get(base)
        simple = base.rsplit(".", 1)[-1]
        if self.ctx.resolver.resolve_name(simple, td) == base:
            name = simple
        elif e is not None and e.outer:
            name = f"{self.type_name(e.outer)}.{simple}"
        else:
            name = base
        return name + "[]" * dims

    def add(self, c):
        if c.expr_type is None or not c.expr_type.supported:
            return
        old = self.out.get(c.key)
        if old is None:
            self.out[c.key] = c

    # ------------------------------------------------------------ forms
    def run(self):
        if not self.expected:
            return []
        self.names_and_fields()
        self.invocations()
        self.literals()
        self.this_expr()
        self.casts()
        self.creations()
        self.array_forms()
        if self.depth >= 2:
            self.second_level()
        return sorted(self.out.values(), key=lambda c: (TYPE_ORDER[c.expr_type], c.rendered, c.holes))

    def names_and_fields(self):
        for v in self.acc.variables:
            if self.compat(v.type):
                if v.shadowed:
                    tree = A.Select(A.This(), v.name)
                else:
                    tree = A.Name(v.name)
                self.add(make_candidate(tree, v.type, f"{v.kind}:{v.name}", is_variable=True,
                                        variable=v, member=v.member, owner_type=v.owner,
                                        static_member=v.kind == "global"))
            if v.shadowed:
                continue
            for f in self._instance_fields(v.type):
                if self.compat(f.type):
                    self.add(make_candidate(A.Select(A.Name(v.name), f.name), f.type,
                                            f"{v.kind}:{v.name}", member=f, owner_type=v.type))
        for q, f in self.acc.static_fields:
            if self.compat(f.type):
                tn = self.type_name(q)
                var = AccessibleVar(f.name, f.type, "global", True, q, member=f)
                self.add(make_candidate(_type_expr(tn, f.name), f.type, f"static:{q}.{f.name}",
                                        is_variable=True, variable=var, member=f, owner_type=q,
                                        static_member=True))

    def _instance_fields(self, t):
        if t in PRIMITIVES or t == NULL_TYPE:
            return []
        return [f for f in self.index.members(t, kind="field")
                if not f.static and self.ctx.can_access(f, self.pos)]

    def _instance_methods(self, t):
        if t in PRIMITIVES or t == NULL_TYPE:
            return []
        return [m for m in self.index.members(t, kind="method")
                if not m.static and m.type != "void" and self.ctx.can_access(m, self.pos)]

    def invocations(self):
        for m in self.acc.methods:
            if m.type != "void" and self.compat(m.type):
                tree = A.Call(None, m.name, [A.Hole() for _ in m.params])
                self.add(make_candidate(tree, m.type, f"method:{m.declared_in}.{m.name}",
                                        member=m, owner_type=m.declared_in,
                                        static_member=m.static))
        for v in self.acc.variables:
            if v.shadowed:
                continue
            for m in self._instance_methods(v.type):
                if self.compat(m.type):
                    tree = A.Call(A.Name(v.name), m.name, [A.Hole() for _ in m.params])
                    self.add(make_candidate(tree, m.type, f"{v.kind}:{v.name}", member=m,
                                            owner_type=v.type))
        for q, m in self.acc.static_methods:
            if m.type != "void" and self.compat(m.type):
                tree = A.Call(_type_ref_expr(self.type_name(q)), m.name,
                              [A.Hole() for _ in m.params])
                self.add(make_candidate(tree, m.type, f"static:{q}.{m.name}", member=m,
                                        owner_type=q, static_member=True))

    def literals(self):
        if self.compat(STRING):
            self.add(make_candidate(A.Literal("string", EMPTY_STRING), STRING, "literal"))
        for text, t in NUMBER_DEFAULTS:
            if self.compat(t):
                self.add(make_candidate(A.Literal("number", text), t, "literal"))
                break
        if self.compat("char"):
            self.add(make_candidate(A.Literal("char", "'\\0'"), "char", "literal"))
        if self.compat("boolean"):
            self.add(make_candidate(A.Literal("bool", "true"), "boolean", "literal"))
            self.add(make_candidate(A.Literal("bool", "false"), "boolean", "literal"))
        if self.compat(NULL_TYPE):
            self.add(make_candidate(A.Literal("null", "null"), NULL_TYPE, "literal"))
        if "java.lang.Class" in self.expected:
            for q in self.acc.static_types:
                tree = A.ClassLit(A.TypeRef(self.type_name(q)))
                self.add(make_candidate(tree, "java.lang.Class", f"type:{q}", owner_type=q))

    def this_expr(self):
        if self.acc.this_available and self.compat(self.acc.this_type):
            self.add(make_candidate(A.This(), self.acc.this_type, "this"))

    def casts(self):
        for v in self.acc.variables:
            if v.shadowed:
                continue
            for e in self.expected:
                if e == v.type or e == NULL_TYPE:
                    continue
                if e in PRIMITIVES or v.type in PRIMITIVES:
                    # narrowing primitive cast
                    ok = e in PRIMITIVES and v.type in PRIMITIVES and v.type in WIDENS_TO[e]
                else:
                    ok = self.index.is_subtype(e, v.type) and self.index.get(e) is not None \
                        and self.ctx.type_accessible(e, self.pos)
                if ok:
                    tree = A.Cast(A.TypeRef(self.type_name(e)), A.Name(v.name))
                    self.add(make_candidate(tree, e, f"{v.kind}:{v.name}", variable=v))

    def creations(self):
        types = set(self.acc.static_types)
        types.update(e for e in self.expected if "[" not in e and e not in PRIMITIVES)
        for q in sorted(types):
            te = self.index.get(q)
            if te is None or not te.instantiable or not self.compat(q):
                continue
            if not self.ctx.type_accessible(q, self.pos):
                continue
            if te.outer and "static" not in te.modifiers and te.kind == "class":
                continue  # inner-class creation needs an outer instance
            name = self.type_name(q)
            for ctor in self.index.constructors(q):
                if not self.ctx.can_access(ctor, self.pos):
                    continue
                tree = A.New(A.TypeRef(name), [A.Hole() for _ in ctor.params])
                self.add(make_candidate(tree, q, f"type:{q}", member=ctor, owner_type=q))

    def array_forms(self):
        for e in self.expected:
            base, dims = split_array(e)
            if dims == 1 and (base in PRIMITIVES or self.ctx.type_accessible(base, self.pos)):
                tree = A.NewArray(A.TypeRef(self.type_name(base)), [A.Hole()])
                self.add(make_candidate(tree, e, f"type:{base}"))
        for v in self.acc.variables:
            if v.shadowed or not v.type.endswith("[]"):
                continue
            comp = v.type[:-2]
            if self.compat(comp):
                self.add(make_candidate(A.Index(A.Name(v.name), A.Hole()), comp,
                                        f"{v.kind}:{v.name}", variable=v))

    def second_level(self):
        """Experimental: one more member access on a field or zero-arg call result."""
        for v in self.acc.variables:
            if v.shadowed:
                continue
            firsts = [(A.Select(A.Name(v.name), f.name), f.type) for f in self._instance_fields(v.type)]
            firsts += [(A.Call(A.Name(v.name), m.name, []), m.type)
                       for m in self._instance_methods(v.type) if not m.params]
            for recv, rt in firsts:
                for f in self._instance_fields(rt):
                    if self.compat(f.type):
                        self.add(make_candidate(A.Select(recv, f.name), f.type, f"{v.kind}:{v.name}",
                                                member=f, owner_type=rt))
                for m in self._instance_methods(rt):
                    if self.compat(m.type):
                        self.add(make_candidate(A.Call(recv, m.name, [A.Hole() for _ in m.params]),
                                                m.type, f"{v.kind}:{v.name}", member=m,
                                                owner_type=rt))


def _type_ref_expr(name):
    parts = name.split(".")
    e = A.Name(parts[0])
    for p in parts[1:]:
        e = A.Select(e, p)
    return e


def _type_expr(type_name, member):
    return A.Select(_type_ref_expr(type_name), member)


def generate_candidates(ctx, pos, acc, expected, depth=1):
    """Sorted candidate list for the request at token `pos`."""
    return Generator(ctx, pos, acc, expected, depth).run()
