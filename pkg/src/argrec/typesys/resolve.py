"""Static typing of expressions at a position, expected argument types, and
the set of elements accessible from a request location."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..corpus import ast as A
from ..corpus.scopes import ScopeTree
from .compat import NUMERIC_PRIMITIVES, is_compatible
from .index import (NULL_TYPE, OBJECT, PRIMITIVES, STRING, UNBOXES, UnitResolver,
                    split_array)

_NUMERIC_RANK = ["byte", "short", "char", "int", "long", "float", "double"]


def literal_type(lit):
    if lit.kind == "string":
        return STRING
    if lit.kind == "char":
        return "char"
    if lit.kind == "bool":
        return "boolean"
    if lit.kind == "null":
        return NULL_TYPE
    t = lit.text.lower()
    if t.endswith("l"):
        return "long"
    if t.startswith("0x") or t.startswith("0b"):
        return "int"
    if t.endswith("f"):
        return "float"
    if t.endswith("d") or "." in t or "e" in t:
        return "double"
    return "int"


def _promote(a, b):
    a = UNBOXES.get(a, a)
    b = UNBOXES.get(b, b)
    if a not in NUMERIC_PRIMITIVES or b not in NUMERIC_PRIMITIVES:
        return None
    r = max(_NUMERIC_RANK.index(a), _NUMERIC_RANK.index(b), _NUMERIC_RANK.index("int"))
    return _NUMERIC_RANK[r]


@dataclass
class Expected:
    type: str
    param_name: str
    member: object  # MemberSig
    varargs: bool = False
    refined_from: Optional[str] = None  # set by object mapping


@dataclass
class ExpectedSet:
    entries: list = field(default_factory=list)
    resolved: bool = True
    reason: str = ""
    receiver_type: Optional[str] = None
    overloads: list = field(default_factory=list)

    @property
    def types(self):
        out = []
        for e in self.entries:
            if e.type not in out:
                out.append(e.type)
        return out

    def names_for(self, t):
        return [e.param_name for e in self.entries if e.type == t]


@dataclass
class AccessibleVar:
    name: str
    type: str
    kind: str  # local | param | field | global
    static: bool = False
    owner: Optional[str] = None  # declaring type for fields
    variable: object = field(default=None, repr=False)  # scopes.Variable
    member: object = field(default=None, repr=False)  # MemberSig for fields
    shadowed: bool = False  # a local hides this field: render as this.f
    type_args: list = field(default_factory=list)


@dataclass
class AccessibleSet:
    variables: list = field(default_factory=list)
    methods: list = field(default_factory=list)  # unqualified callable MemberSig
    static_types: list = field(default_factory=list)  # qualified names
    static_fields: list = field(default_factory=list)  # (type, MemberSig) via Type.F
    static_methods: list = field(default_factory=list)  # (type, MemberSig) via Type.m()
    this_available: bool = False
    this_type: Optional[str] = None
    enclosing: list = field(default_factory=list)  # enclosing type chain, innermost first

    def names(self):
        return {v.name for v in self.variables}


class UnitContext:
    """Per-unit typing context shared by all requests in one file."""

    def __init__(self, unit, index, strict=False):
        self.unit = unit
        self.index = index
        self.strict = strict
        self.scopes = ScopeTree(unit)
        self.resolver = UnitResolver(index, unit)
        self._var_types = {}

    # ------------------------------------------------------------ location
    def enclosing_type(self, pos):
        return self.scopes.enclosing_type(pos)

    def enclosing_method(self, pos):
        return self.scopes.enclosing_method(pos)

    def type_chain(self, pos):
        out = []
        t = self.enclosing_type(pos)
        while t is not None:
            out.append(t)
            t = t.outer
        return out

    def static_context(self, pos):
        m = self.enclosing_method(pos)
        if m is not None:
            return m.is_static or m.name == "<clinit>"
        td = self.enclosing_type(pos)
        if td is None:
            return True
        for fd in td.fields:
            if fd.start <= pos < fd.end:
                return "static" in fd.modifiers or td.kind == "interface"
        return False

    def instance_levels(self, pos):
        """[(TypeDecl, instance members usable)] innermost first."""
        out = []
        ok = not self.static_context(pos)
        for td in self.type_chain(pos):
            out.append((td, ok and td.kind != "interface"))
            if "static" in td.modifiers or td.kind in ("interface", "enum") or \
                    (td.outer is not None and td.outer.kind == "interface"):
                ok = False
        return out

    def can_access(self, m, pos, via_type=None):
        td = self.enclosing_type(pos)
        here = td.qualified_name if td else ""
        pkg = self.unit.package
        owner = self.index.get(m.declared_in)
        if m.access == "public":
            return True
        if m.access == "private":
            return bool(here) and self.index.top_level(here) == self.index.top_level(m.declared_in)
        owner_pkg = owner.package if owner is not None else m.declared_in.rpartition(".")[0]
        if owner_pkg == pkg:
            return True
        if m.access == "protected":
            t = td
            while t is not None:
                if self.index.is_subtype(t.qualified_name, m.declared_in):
                    return True
                t = t.outer
        return False

    def type_accessible(self, qname, pos):
        base = split_array(qname)[0]
        e = self.index.get(base)
        if e is None:
            return False
        if e.kind == "primitive" or e.access == "public":
            return True
        if e.access == "private":
            td = self.enclosing_type(pos)
            return td is not None and self.index.top_level(td.qualified_name) == \
                self.index.top_level(base)
        return e.package == self.unit.package

    # ------------------------------------------------------------ variables
    def var_type(self, v):
        key = id(v)
        if key in self._var_types:
            return self._var_types[key]
        td = v.owner if v.owner is not None else self.enclosing_type(v.visible_from)
        m = v.block.method if v.block.kind != "class-body" else None
        if m is None:
            mb = v.block
            while mb is not None and mb.kind != "method-body":
                mb = mb.parent
            m = mb.method if mb is not None else None
        if v.type is not None and v.type.name == "var" and v.init is not None:
            t = self.type_of(v.init, v.visible_from) or OBJECT
        elif v.type is None:
            t = OBJECT
        else:
            t = self.resolver.erase(v.type, td, m)
        self._var_types[key] = t
        return t

    def var_type_args(self, v):
        if v.type is None or not v.type.args:
            return []
        td = v.owner if v.owner is not None else self.enclosing_type(v.visible_from)
        return [self.resolver.erase(a, td) if a.name != "<>" else OBJECT for a in v.type.args]

    def lookup_variable(self, name, pos):
        """A visible local/param, or a field of the enclosing chain (incl. inherited)."""
        vis = self.scopes.visible(pos)
        v = vis.get(name)
        if v is not None and v.kind != "field":
            return ("var", v)
        for td in self.type_chain(pos):
            fs = self.index.members(td.qualified_name, name, "field")
            fs = [f for f in fs if self.can_access(f, pos)]
            if fs:
                return ("field", fs[0])
        for owner, member in self.resolver.static_single:
            if member == name:
                fs = [f for f in self.index.members(owner, name, "field") if f.static]
                if fs:
                    return ("field", fs[0])
        for owner in self.resolver.static_on_demand:
            fs = [f for f in self.index.members(owner, name, "field") if f.static]
            if fs:
                return ("field", fs[0])
        return None

    def field_variable(self, name, pos):
        """Scope-tree Variable record of a same-unit field, if any."""
        v = self.scopes.visible(pos).get(name)
        return v if v is not None and v.kind == "field" else None

    # ------------------------------------------------------------ types
    def resolve_type_ref(self, ref, pos):
        td = self.enclosing_type(pos)
        return self.resolver.erase(ref, td, self.enclosing_method(pos))

    def static_ref(self, e, pos):
        """Qualified type name when `e` denotes a type rather than a value."""
        if isinstance(e, A.Name):
            if self.lookup_variable(e.ident, pos) is not None:
                return None
            q = self.resolver.resolve_name(e.ident, self.enclosing_type(pos))
            return q if q is not None and q not in PRIMITIVES else None
        if isinstance(e, A.Select):
            inner = self.static_ref(e.target, pos)
            if inner is not None:
                q = f"{inner}.{e.ident}"
                return q if self.index.get(q) is not None else None
            if self._package_chain(e.target, pos):
                dotted = _dotted(e)
                if dotted and self.index.get(dotted) is not None:
                    return dotted
        return None

    def _package_chain(self, e, pos):
        if isinstance(e, A.Name):
            return self.lookup_variable(e.ident, pos) is None and \
                self.resolver.resolve_name(e.ident, self.enclosing_type(pos)) is None
        if isinstance(e, A.Select):
            return self._package_chain(e.target, pos) and self.static_ref(e, pos) is None
        return False

    def type_of(self, e, pos):
        """Erased static type of an expression at token position `pos`, or None."""
        t = self._type_of(e, pos)
        return t

    def _type_of(self, e, pos):
        idx = self.index
        if isinstance(e, A.Literal):
            return literal_type(e)
        if isinstance(e, A.Name):
            hit = self.lookup_variable(e.ident, pos)
            if hit is None:
                return None
            kind, v = hit
            return self.var_type(v) if kind == "var" else v.type
        if isinstance(e, A.Select):
            owner = self.static_ref(e.target, pos)
            if owner is not None:
                fs = [f for f in idx.members(owner, e.ident, "field") if f.static]
                return fs[0].type if fs else None
            tt = self.type_of(e.target, pos)
            if tt is None:
                return None
            fs = idx.members(tt, e.ident, "field")
            return fs[0].type if fs else None
        if isinstance(e, A.Call):
            ms, _, _ = self.methods_for_call(e, pos)
            if not ms:
                return None
            return self._pick_overload(ms, e.args, pos).type
        if isinstance(e, A.New):
            return self.resolve_type_ref(e.type, pos)
        if isinstance(e, A.NewArray):
            base = self.resolve_type_ref(A.TypeRef(e.type.name), pos)
            return base + "[]" * (len(e.dims) + e.extra_dims)
        if isinstance(e, A.Index):
            tt = self.type_of(e.target, pos)
            if tt is None or not tt.endswith("[]"):
                return None
            return tt[:-2]
        if isinstance(e, A.This):
            if e.qualifier:
                return self.resolver.resolve_name(e.qualifier, self.enclosing_type(pos))
            td = self.enclosing_type(pos)
            return td.qualified_name if td else None
        if isinstance(e, A.Super):
            td = self.enclosing_type(pos)
            if td is None:
                return None
            sups = idx.get(td.qualified_name).supertypes
            return sups[0] if sups else OBJECT
        if isinstance(e, A.ClassLit):
            return "java.lang.Class"
        if isinstance(e, A.Cast):
            return self.resolve_type_ref(e.type, pos)
        if isinstance(e, A.Paren):
            return self.type_of(e.inner, pos)
        if isinstance(e, A.Conditional):
            return self.type_of(e.then, pos) or self.type_of(e.other, pos)
        if isinstance(e, A.Assign):
            return self.type_of(e.target, pos)
        if isinstance(e, A.InstanceOf):
            return "boolean"
        if isinstance(e, A.Unary):
            if e.op == "!":
                return "boolean"
            t = self.type_of(e.operand, pos)
            if e.op in ("++", "--"):
                return t
            return _promote(t, "int") if t else None
        if isinstance(e, A.Binary):
            if e.op in ("==", "!=", "<", ">", "<=", ">=", "&&", "||", "instanceof"):
                return "boolean"
            lt, rt = self.type_of(e.left, pos), self.type_of(e.right, pos)
            if e.op == "+" and STRING in (lt, rt):
                return STRING
            if e.op in ("&", "|", "^") and lt == "boolean":
                return "boolean"
            if e.op in ("<<", ">>", ">>>"):
                return _promote(lt, "int") if lt else None
            return _promote(lt, rt) if lt and rt else None
        return None

    def _pick_overload(self, ms, args, pos):
        cands = [m for m in ms if m.arity == len(args) or (m.varargs and len(args) >= m.arity - 1)]
        if not cands:
            return ms[0]
        if len(cands) == 1:
            return cands[0]
        arg_types = [self.type_of(a, pos) if not isinstance(a, A.Hole) else None for a in args]
        for m in cands:
            ok = True
            for i, at in enumerate(arg_types):
                if at is None or i >= m.arity:
                    continue
                if not is_compatible(at, m.params[i][1], self.index, self.strict):
                    ok = False
                    break
            if ok:
                return m
        return cands[0]

    # ------------------------------------------------------------ calls
    def methods_for_call(self, call, pos):
        """(overloads, receiver type, receiver is a type) for a Call or New node."""
        idx = self.index
        if isinstance(call, A.New):
            q = self.resolve_type_ref(A.TypeRef(call.type.name), pos)
            ms = [m for m in idx.constructors(q) if self.can_access(m, pos)]
            return ms, q, True
        name = call.ident
        if call.target is None:
            for td, _ in self.instance_levels(pos):
                ms = idx.members(td.qualified_name, name, "method")
                ms = [m for m in ms if self.can_access(m, pos)]
                if ms:
                    return ms, td.qualified_name, False
            for owner, member in self.resolver.static_single:
                if member == name:
                    ms = [m for m in idx.members(owner, name, "method") if m.static]
                    if ms:
                        return ms, owner, True
            for owner in self.resolver.static_on_demand:
                ms = [m for m in idx.members(owner, name, "method") if m.static]
                if ms:
                    return ms, owner, True
            td = self.enclosing_type(pos)
            return [], td.qualified_name if td else None, False
        if isinstance(call.target, A.Super):
            rt = self.type_of(call.target, pos)
            static = False
        else:
            rt = None
            static = False
            if isinstance(call.target, (A.Name, A.Select)):
                owner = self.static_ref(call.target, pos)
                if owner is not None:
                    rt, static = owner, True
            if rt is None:
                rt = self.type_of(call.target, pos)
        if rt is None:
            return [], None, static
        ms = [m for m in idx.members(rt, name, "method") if self.can_access(m, pos)]
        if static:
            ms = [m for m in ms if m.static]
        return ms, rt, static

    def expected_types(self, call, pos_arg, at):
        """Expected types for argument `pos_arg` (1-based) of `call` at token `at`."""
        ms, rt, _ = self.methods_for_call(call, at)
        out = ExpectedSet(receiver_type=rt, overloads=ms)
        if rt is None:
            out.resolved, out.reason = False, "unresolved receiver"
            return out
        if not ms:
            out.resolved, out.reason = False, "unresolved callee"
            return out
        for m in ms:
            if m.varargs and pos_arg >= m.arity:
                name, arr = m.params[-1]
                comp = arr[:-2]
                if pos_arg == m.arity:
                    _add(out, Expected(arr, name, m, True))
                _add(out, Expected(comp, name, m, True))
            elif m.arity >= pos_arg:
                name, t = m.params[pos_arg - 1]
                _add(out, Expected(t, name, m))
        if not out.entries:
            out.resolved, out.reason = False, f"no overload with arity >= {pos_arg}"
        return out

    def receiver_type_args(self, call, pos):
        """Recorded type arguments of a call receiver that is a declared variable."""
        if not isinstance(call, A.Call) or not isinstance(call.target, A.Name):
            return []
        v = self.scopes.visible(pos).get(call.target.ident)
        if v is None:
            return []
        return self.var_type_args(v)

    def map_object_to_type_param(self, call, expected, pos):
        """Replace Object expectations by the receiver's type argument where a
        same-named parameter of a sibling member is declared with a type variable."""
        if not isinstance(call, A.Call) or expected.receiver_type is None:
            return expected
        targs = self.receiver_type_args(call, pos)
        recv = self.index.get(expected.receiver_type)
        if not targs or recv is None or not recv.type_params:
            return expected
        out = ExpectedSet(receiver_type=expected.receiver_type, overloads=expected.overloads,
                          resolved=expected.resolved, reason=expected.reason)
        for ex in expected.entries:
            new = ex
            if ex.type == OBJECT:
                decl = self.index.get(ex.member.declared_in)
                tvar = None
                for sib in (decl.members if decl is not None else []):
                    for (pname, _), tv in zip(sib.params, sib.param_tvars):
                        if pname == ex.param_name and tv is not None:
                            tvar = tv
                            break
                    if tvar:
                        break
                if tvar is not None and tvar in recv.type_params:
                    i = recv.type_params.index(tvar)
                    if i < len(targs) and targs[i] != OBJECT:
                        new = Expected(targs[i], ex.param_name, ex.member, ex.varargs, OBJECT)
            _add(out, new)
        return out

    # ------------------------------------------------------------ accessibility
    def accessible(self, pos):
        idx = self.index
        acc = AccessibleSet()
        levels = self.instance_levels(pos)
        acc.enclosing = [td.qualified_name for td, _ in levels]
        if levels:
            acc.this_available = levels[0][1]
            acc.this_type = levels[0][0].qualified_name if acc.this_available else None
        vis = self.scopes.visible(pos)
        locals_ = {}
        for name in sorted(vis):
            v = vis[name]
            if v.kind == "field":
                continue
            locals_[name] = v
            acc.variables.append(AccessibleVar(name, self.var_type(v), v.kind, variable=v,
                                               type_args=self.var_type_args(v)))
        seen_fields = set()
        for depth, (td, inst_ok) in enumerate(levels):
            for f in idx.members(td.qualified_name, kind="field"):
                if f.name in seen_fields or not self.can_access(f, pos):
                    continue
                if not f.static and not inst_ok:
                    continue
                seen_fields.add(f.name)
                fv = vis.get(f.name) if depth == 0 else None
                shadowed = f.name in locals_
                if shadowed and (depth > 0 or f.static):
                    # an outer or static field hidden by a local has no short form here
                    continue
                acc.variables.append(AccessibleVar(
                    f.name, f.type, "field", f.static, f.declared_in,
                    variable=fv if fv is not None and fv.kind == "field" else None,
                    member=f, shadowed=shadowed,
                    type_args=self.var_type_args(fv) if fv is not None and fv.kind == "field" else []))
            for m in idx.members(td.qualified_name, kind="method"):
                if not self.can_access(m, pos) or (not m.static and not inst_ok):
                    continue
                if any(x.name == m.name and x.param_types() == m.param_types() for x in acc.methods):
                    continue
                if any(x.name == m.name and x.declared_in not in idx.ancestors(td.qualified_name)
                       for x in acc.methods):
                    continue  # an inner class's method of this name hides outer ones
                acc.methods.append(m)
        for owner, member in self.resolver.static_single:
            for f in idx.members(owner, member, "field"):
                if f.static and f.name not in seen_fields and f.name not in locals_:
                    seen_fields.add(f.name)
                    acc.variables.append(AccessibleVar(f.name, f.type, "global", True, owner,
                                                       member=f))
        acc.static_types = self.static_universe(pos)
        enclosing = set(acc.enclosing)
        for q in acc.static_types:
            if q in enclosing:
                continue
            for m in idx.members(q):
                if not m.static or m.kind == "constructor" or not self.can_access(m, pos):
                    continue
                if m.kind == "field":
                    acc.static_fields.append((q, m))
                elif m.kind == "method":
                    acc.static_methods.append((q, m))
        return acc

    def static_universe(self, pos):
        """Types usable for static access, creation and type literals at `pos`."""
        idx = self.index
        found = set()
        for qn, static, demand in self.unit.imports:
            if static:
                continue
            if demand:
                found.update(idx.in_package(qn))
            elif qn in idx.types:
                found.add(qn)
        found.update(idx.in_package(self.unit.package))
        found.update(idx.in_package("java.lang"))
        td = self.enclosing_type(pos)
        for word in {t.text for t in self.unit.tokens[:pos] if t.kind == "ident"}:
            q = self.resolver.resolve_name(word, td)
            if q is not None and q not in PRIMITIVES:
                found.add(q)
        for t in self.type_chain(pos):
            found.add(t.qualified_name)
            for anc in idx.ancestors(t.qualified_name):
                for q in idx.in_package(idx.get(anc).package if idx.get(anc) else ""):
                    e = idx.get(q)
                    if e is not None and e.outer == anc:
                        found.add(q)
        return sorted(q for q in found if self._usable_type(q, pos))

    def _usable_type(self, q, pos):
        e = self.index.get(q)
        if e is None or e.kind not in ("class", "interface", "enum"):
            return False
        if not self.type_accessible(q, pos):
            return False
        # nested types must be reachable through their simple or qualified name
        return True


def _add(es, ex):
    for old in es.entries:
        if old.type == ex.type and old.param_name == ex.param_name:
            return
    es.entries.append(ex)


def _dotted(e):
    parts = []
    while isinstance(e, A.Select):
        parts.append(e.ident)
        e = e.target
    if not isinstance(e, A.Name):
        return None
    parts.append(e.ident)
    return ".".join(reversed(parts))
