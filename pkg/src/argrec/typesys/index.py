"""Type universe: project declarations plus library stubs.

Types are keyed by erased qualified name. Nested types use a dot
(``p.Outer.Inner``). Arrays are synthesised on demand as ``T[]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from ..corpus import ast as A
from ..corpus.lexer import ParseError, tokenize
from ..corpus.parser import Parser

OBJECT = "java.lang.Object"
STRING = "java.lang.String"
NULL_TYPE = "<null>"
PRIMITIVES = ("boolean", "byte", "char", "short", "int", "long", "float", "double")
BOXES = {
    "boolean": "java.lang.Boolean", "byte": "java.lang.Byte", "char": "java.lang.Character",
    "short": "java.lang.Short", "int": "java.lang.Integer", "long": "java.lang.Long",
    "float": "java.lang.Float", "double": "java.lang.Double",
}
UNBOXES = {v: k for k, v in BOXES.items()}
ARRAY_SUPERS = [OBJECT, "java.lang.Cloneable", "java.io.Serializable"]


class TypeIndexError(Exception):
    pass


@dataclass
class MemberSig:
    name: str
    kind: str  # field | method | constructor
    static: bool
    access: str  # public | protected | package | private
    params: list  # list of (name, erased type)
    type: str  # return/field type (erased); owner type for constructors
    declared_in: str
    varargs: bool = False
    # declared (pre-erasure) type variable names, None where not a type variable
    param_tvars: list = field(default_factory=list)
    type_tvar: Optional[str] = None

    @property
    def arity(self):
        return len(self.params)

    def param_types(self):
        return tuple(t for _, t in self.params)


@dataclass
class TypeEntry:
    qualified_name: str
    kind: str  # class | interface | enum | primitive | array
    supertypes: list = field(default_factory=list)
    type_params: list = field(default_factory=list)
    members: list = field(default_factory=list)
    package: str = ""
    source: str = "stub"  # project | stub
    file: str = ""
    project: str = ""
    access: str = "public"
    abstract: bool = False
    outer: Optional[str] = None
    component: Optional[str] = None  # arrays only
    modifiers: frozenset = frozenset()
    decl: Optional[A.TypeDecl] = field(default=None, repr=False)

    @property
    def simple(self):
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def is_reference(self):
        return self.kind != "primitive"

    @property
    def instantiable(self):
        return self.kind == "class" and not self.abstract

    def members_named(self, name, kind=None):
        return [m for m in self.members if m.name == name and (kind is None or m.kind == kind)]


def split_array(q):
    dims = 0
    while q.endswith("[]"):
        q, dims = q[:-2], dims + 1
    return q, dims


def package_of(qname, index=None):
    e = index.get(qname) if index is not None else None
    if e is not None:
        return e.package
    return qname.rsplit(".", 1)[0] if "." in qname else ""


def parse_type_text(text):
    """Parse a type string such as ``java.util.Map<K,V>`` or ``T...`` into a TypeRef."""
    varargs = text.endswith("...")
    if varargs:
        text = text[:-3]
    try:
        p = Parser(tokenize(text), "<stub>")
        if text in PRIMITIVES or text == "void":
            ref = A.TypeRef(text)
            p.i = 1
        else:
            ref = p.type()
        if p.i != len(p.toks):
            raise ParseError("trailing text in type", 1, p.i + 1)
    except ParseError as exc:
        raise TypeIndexError(f"bad type {text!r}: {exc}") from exc
    if varargs:
        ref.dims += 1
        ref.varargs = True
    return ref


class TypeIndex:
    def __init__(self):
        self.types = {}
        self.warnings = []
        self._ancestors = {}
        self._by_simple = {}
        self._by_package = {}

    # ------------------------------------------------------------ lookup
    def get(self, qname):
        if qname is None:
            return None
        e = self.types.get(qname)
        if e is not None:
            return e
        if qname in PRIMITIVES:
            e = TypeEntry(qname, "primitive")
            self.types[qname] = e
            return e
        if qname.endswith("[]"):
            comp = qname[:-2]
            if comp not in PRIMITIVES and self.get(comp) is None:
                return None
            e = TypeEntry(qname, "array", list(ARRAY_SUPERS), component=comp,
                          members=[MemberSig("length", "field", False, "public", [], "int", qname)])
            self.types[qname] = e
            return e
        return None

    def __contains__(self, qname):
        return self.get(qname) is not None

    def by_simple(self, simple):
        return self._by_simple.get(simple, [])

    def in_package(self, package):
        return self._by_package.get(package, [])

    def add(self, entry):
        old = self.types.get(entry.qualified_name)
        if old is not None:
            raise TypeIndexError(
                f"duplicate type {entry.qualified_name}: declared in {old.file or '<stub>'} "
                f"and {entry.file or '<stub>'}")
        self.types[entry.qualified_name] = entry
        self._by_simple.setdefault(entry.simple, []).append(entry.qualified_name)
        self._by_package.setdefault(entry.package, []).append(entry.qualified_name)
        self._ancestors.clear()

    def reference_types(self):
        return sorted(q for q, e in self.types.items() if e.kind in ("class", "interface", "enum"))

    # ------------------------------------------------------------ hierarchy
    def ancestors(self, qname):
        """Self first, then all supertypes breadth-first; reference types end at Object."""
        hit = self._ancestors.get(qname)
        if hit is not None:
            return hit
        e = self.get(qname)
        if e is None:
            out = [qname] if qname == OBJECT else [qname, OBJECT]
        elif e.kind == "primitive":
            out = [qname]
        else:
            out, seen, queue = [], set(), [qname]
            while queue:
                q = queue.pop(0)
                if q in seen:
                    continue
                seen.add(q)
                out.append(q)
                se = self.get(q)
                if se is not None:
                    queue.extend(se.supertypes)
            if OBJECT in seen:
                out.remove(OBJECT)
            out.append(OBJECT)
        self._ancestors[qname] = out
        return out

    def is_subtype(self, sub, sup):
        return sup in self.ancestors(sub)

    def members(self, qname, name=None, kind=None):
        """Members visible on a type, inherited ones included; overridden ones dropped."""
        out, seen = [], set()
        for q in self.ancestors(qname):
            e = self.get(q)
            if e is None:
                continue
            for m in e.members:
                if name is not None and m.name != name:
                    continue
                if kind is not None and m.kind != kind:
                    continue
                if m.kind == "constructor" and q != qname:
                    continue
                key = (m.kind, m.name, m.param_types() if m.kind != "field" else ())
                if key in seen:
                    continue
                seen.add(key)
                out.append(m)
        return out

    def constructors(self, qname):
        e = self.get(qname)
        if e is None or e.kind != "class":
            return []
        ctors = e.members_named("<init>", "constructor")
        if not ctors and e.source == "project":
            # implicit default constructor
            ctors = [MemberSig("<init>", "constructor", False,
                               "public" if e.access == "public" else e.access, [], qname, qname)]
        return ctors

    def top_level(self, qname):
        e = self.get(qname)
        while e is not None and e.outer:
            e = self.get(e.outer)
        return e.qualified_name if e is not None else qname

    def check_acyclic(self):
        """Drop supertype edges that close a cycle (recorded as warnings)."""
        state = {}

        def visit(q):
            state[q] = 1
            e = self.types[q]
            keep = []
            for s in e.supertypes:
                if state.get(s) == 1:
                    self.warnings.append(f"cyclic supertype {q} -> {s} dropped")
                    continue
                if s in self.types and s not in state:
                    visit(s)
                keep.append(s)
            e.supertypes = keep or ([OBJECT] if q != OBJECT else [])
            state[q] = 2

        for q in sorted(self.types):
            if q not in state and self.types[q].kind in ("class", "interface", "enum"):
                visit(q)
        self._ancestors.clear()


# ---------------------------------------------------------------- stubs

def load_stub(doc, path="<stub>"):
    """Turn one stub document (already decoded) into TypeEntry records.

    Documents marked ``"qualified": true`` (exported project types) carry
    erased, fully qualified type names and are taken verbatim.
    """
    verbatim = bool(doc.get("qualified"))
    entries = []
    for rec in doc["types"]:
        q = rec["qualifiedName"]
        tps = list(rec.get("typeParams", []))

        def erase(text):
            ref = parse_type_text(text)
            if verbatim:
                return ref, ref.name + "[]" * ref.dims
            return ref, _erase_ref(ref, tps)

        e = TypeEntry(q, rec.get("kind", "class"), package=rec.get("package", package_of(q)),
                      type_params=tps, source=rec.get("source", "stub"),
                      file=rec.get("file", path), project=rec.get("project", ""),
                      access=rec.get("access", "public"), abstract=rec.get("abstract", False),
                      outer=rec.get("outer"), modifiers=frozenset(rec.get("modifiers", ())))
        for s in rec.get("supertypes", []):
            e.supertypes.append(erase(s)[1])
        if not e.supertypes and q != OBJECT and e.kind != "primitive":
            e.supertypes.append(OBJECT)
        for m in rec.get("members", []):
            params, tvars, varargs = [], [], bool(m.get("varargs", False))
            for p in m.get("params", []):
                ref, t = erase(p["type"])
                varargs = varargs or ref.varargs
                params.append((p["name"], t))
                tv = p.get("typeVar")
                if tv is None and not verbatim and ref.name in tps and not ref.dims:
                    tv = ref.name
                tvars.append(tv)
            kind = m.get("kind", "method")
            rt = m.get("returnType") or (q if kind == "constructor" else "void")
            rref, rtype = erase(rt)
            rtv = m.get("typeVar")
            if rtv is None and not verbatim and rref.name in tps and not rref.dims:
                rtv = rref.name
            e.members.append(MemberSig(
                m["name"], kind, bool(m.get("static", False)), m.get("access", "public"),
                params, rtype, q, varargs, tvars, rtv))
        entries.append(e)
    return entries


def export_project_types(index):
    """Project types as a stub document (erased, fully qualified names)."""
    types = []
    for q in sorted(index.types):
        e = index.types[q]
        if e.source != "project":
            continue
        members = []
        for m in e.members:
            rec = {"name": m.name, "kind": m.kind, "static": m.static, "access": m.access,
                   "params": [], "returnType": m.type}
            for (pname, ptype), tv in zip(m.params, m.param_tvars or [None] * len(m.params)):
                prec = {"name": pname, "type": ptype}
                if tv is not None:
                    prec["typeVar"] = tv
                rec["params"].append(prec)
            if m.varargs:
                rec["varargs"] = True
            if m.type_tvar is not None:
                rec["typeVar"] = m.type_tvar
            members.append(rec)
        types.append({
            "qualifiedName": q, "kind": e.kind, "supertypes": list(e.supertypes),
            "typeParams": list(e.type_params), "members": members, "package": e.package,
            "outer": e.outer, "access": e.access, "abstract": e.abstract,
            "modifiers": sorted(e.modifiers), "source": "project", "file": e.file,
            "project": e.project,
        })
    return {"library": "project", "qualified": True, "types": types}


def _erase_stub(text, tparams):
    return _erase_ref(parse_type_text(text), tparams)


def _erase_ref(ref, tparams):
    base = ref.name
    if base in tparams:
        base = OBJECT
    elif base not in PRIMITIVES and base != "void" and "." not in base:
        base = "java.lang." + base
    return base + "[]" * ref.dims


def bundled_stub_paths():
    return [resources.files("argrec.typesys") / "data" / "jdk.json"]


def read_stub(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------- project types

class UnitResolver:
    """Resolves type names written in one compilation unit."""

    def __init__(self, index, unit):
        self.index = index
        self.unit = unit
        self.package = unit.package
        self.single = {}
        self.on_demand = []
        self.static_single = []  # (type qname, member name)
        self.static_on_demand = []  # type qname
        for qn, static, demand in unit.imports:
            if static:
                if demand:
                    self.static_on_demand.append(qn)
                else:
                    owner, _, member = qn.rpartition(".")
                    self.static_single.append((owner, member))
            elif demand:
                self.on_demand.append(qn)
            else:
                self.single[qn.rsplit(".", 1)[-1]] = qn
        self.top = {td.name: td.qualified_name for td in unit.types}
        self._cache = {}

    def tparam_env(self, td, method=None):
        """Type-variable name -> bound TypeRef (or None), innermost declaration wins."""
        env = {}
        chain = []
        t = td
        while t is not None:
            chain.append(t)
            t = t.outer
        for t in reversed(chain):
            for name, bound in t.type_params:
                env[name] = (bound, t)
        if method is not None:
            for name, bound in method.type_params:
                env[name] = (bound, None)
        return env

    def resolve_name(self, name, td=None):
        """Qualified name for a (possibly dotted) type name, or None."""
        key = (name, id(td))
        if key in self._cache:
            return self._cache[key]
        out = self._resolve(name, td)
        self._cache[key] = out
        return out

    def _resolve(self, name, td):
        idx = self.index
        if name in PRIMITIVES or name == "void":
            return name
        if "." in name:
            head, _, rest = name.partition(".")
            base = self._resolve(head, td)
            if base is not None:
                q = base
                for part in rest.split("."):
                    q = q + "." + part
                    if q not in idx:
                        q = None
                        break
                if q is not None:
                    return q
            return name if name in idx else None
        t = td
        while t is not None:
            if t.name == name:
                return t.qualified_name
            hit = self.member_type(t.qualified_name, name)
            if hit:
                return hit
            t = t.outer
        if name in self.top:
            return self.top[name]
        if name in self.single:
            q = self.single[name]
            return q if q in idx else None
        q = f"{self.package}.{name}" if self.package else name
        if q in idx:
            return q
        for pkg in self.on_demand:
            q = f"{pkg}.{name}"
            if q in idx:
                return q
        q = "java.lang." + name
        if q in idx:
            return q
        return None

    def member_type(self, owner, name):
        for anc in self.index.ancestors(owner):
            q = f"{anc}.{name}"
            e = self.index.get(q)
            if e is not None and e.outer == anc:
                return q
        return None

    def erase(self, ref, td=None, method=None, env=None):
        """Erased qualified type of a TypeRef ('<unknown>' names fall back to Object)."""
        if env is None:
            env = self.tparam_env(td, method) if td is not None else {}
        name = ref.name
        if name in env:
            bound = env[name][0]
            base = self.erase(bound, td, None, {k: v for k, v in env.items() if k != name}) \
                if bound is not None else OBJECT
            base, bdims = split_array(base)
            return base + "[]" * (ref.dims + bdims)
        q = self.resolve_name(name, td)
        if q is None:
            q = OBJECT
        return q + "[]" * ref.dims

    def type_var(self, ref, td=None, method=None):
        env = self.tparam_env(td, method) if td is not None else {}
        return ref.name if ref.name in env and not ref.dims else None


def _access(mods, default="package"):
    for a in ("public", "protected", "private"):
        if a in mods:
            return a
    return default


def _declare_unit(index, unit):
    for td in unit.all_types():
        access = _access(td.modifiers)
        if td.outer is not None and td.outer.kind == "interface":
            access = "public"
        e = TypeEntry(td.qualified_name, td.kind, package=unit.package, source="project",
                      file=unit.path, project=unit.project, access=access,
                      abstract="abstract" in td.modifiers or td.kind == "interface",
                      outer=td.outer.qualified_name if td.outer else None,
                      type_params=[n for n, _ in td.type_params],
                      modifiers=td.modifiers, decl=td)
        index.add(e)


def _fill_unit(index, unit):
    res = UnitResolver(index, unit)
    for td in unit.all_types():
        e = index.types[td.qualified_name]
        sups = []
        for ref in td.extends + td.implements:
            # supertype names resolve in the scope enclosing the declaration
            q = res.resolve_name(ref.name, td.outer) or res.resolve_name(ref.name, td)
            if q is None or q in PRIMITIVES:
                index.warnings.append(
                    f"{unit.path}: unresolved supertype {ref.name} of {td.qualified_name}; using Object")
                continue
            sups.append(q)
        if td.kind == "enum":
            sups.insert(0, "java.lang.Enum")
        e.supertypes = sups or [OBJECT]
        iface = td.kind == "interface"
        for const in td.enum_constants:
            e.members.append(MemberSig(const.name, "field", True, "public", [],
                                       td.qualified_name, td.qualified_name))
        for fd in td.fields:
            static = iface or "static" in fd.modifiers
            access = "public" if iface else _access(fd.modifiers)
            for d in fd.declarators:
                ref = A.TypeRef(fd.type.name, fd.type.args, fd.type.dims + d.dims)
                e.members.append(MemberSig(d.name, "field", static, access, [],
                                           res.erase(ref, td), td.qualified_name,
                                           type_tvar=res.type_var(ref, td)))
        for m in td.methods:
            if m.name in ("<clinit>", "<block>"):
                continue
            params, tvars, varargs = [], [], False
            for p in m.params:
                params.append((p.name, res.erase(p.type, td, m)))
                tvars.append(res.type_var(p.type, td, m))
                varargs = varargs or p.type.varargs
            access = _access(m.modifiers, "public" if iface else "package")
            if m.is_constructor:
                e.members.append(MemberSig("<init>", "constructor", False, access, params,
                                           td.qualified_name, td.qualified_name, varargs, tvars))
            else:
                e.members.append(MemberSig(
                    m.name, "method", m.is_static, access, params,
                    res.erase(m.return_type, td, m), td.qualified_name, varargs, tvars,
                    res.type_var(m.return_type, td, m)))


def build_type_index(units, stubs=None, include_bundled=True, exclude_files=()):
    """Index project units plus stub documents.

    `stubs` is a list of file paths or already-decoded documents. Stub
    records whose ``file`` is in `exclude_files` are skipped (used when a
    file indexed at training time is parsed again).
    """
    exclude_files = set(exclude_files)
    index = TypeIndex()
    docs = []
    if include_bundled:
        for p in bundled_stub_paths():
            docs.append((json.loads(p.read_text(encoding="utf-8")), str(p.name)))
    for s in stubs or []:
        if isinstance(s, dict):
            docs.append((s, s.get("library", "<stub>")))
        else:
            docs.append((read_stub(s), str(s)))
    for unit in units:
        _declare_unit(index, unit)
    # a re-parsed project file wins over its exported copy in a bundle
    parsed = {u.path for u in units}
    for doc, path in docs:
        for e in load_stub(doc, path):
            if e.source == "project" and (e.file in exclude_files or e.file in parsed
                                          or e.qualified_name in index.types):
                continue
            index.add(e)
    for unit in units:
        _fill_unit(index, unit)
    index.check_acyclic()
    return index
