import pytest

from argrec.candgen import (EMPTY_STRING, generate_candidates, placeholderize, render_candidate)
from argrec.corpus import ast as A
from argrec.corpus.ast import ExprType
from argrec.corpus.exprs import classify
from argrec.corpus.parser import parse_expression
from argrec.corpus.requests import extract_requests
from argrec.typesys.compat import WIDENS_TO, is_compatible
from argrec.typesys.index import NULL_TYPE, PRIMITIVES, STRING, split_array
from argrec.typesys.resolve import AccessibleSet, UnitContext

from conftest import unit_ctx


def _cands(src, callee, pos=1, extra=()):
    u, ctx = unit_ctx(src, extra=extra)
    for r in extract_requests(u, ctx=ctx):
        if r.callee == callee and r.pos == pos:
            return generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected), r, ctx
    raise AssertionError(f"no request {callee}/{pos}")


def test_string_request_includes_locals_calls_and_literals():
    token = "class Token { String getImage() { return null; } }"
    src = ("class T { String getImage() { return null; } void use(String x) {} "
           "void m(Token tokenID) { String s = null; use(s); } }")
    cands, _, _ = _cands(src, "use", extra=[token])
    rendered = {c.rendered for c in cands}
    assert {"s", "getImage()", "tokenID.getImage()", EMPTY_STRING, "null"} <= rendered


def test_boolean_with_nothing_accessible_gives_true_false():
    u, ctx = unit_ctx("class T { void f(boolean b) {} void m() { f(true); } }")
    (r,) = extract_requests(u, ctx=ctx)
    cands = generate_candidates(ctx, r.offset, AccessibleSet(), r.expected)
    assert sorted(c.rendered for c in cands) == ["false", "true"]


def test_int_request_with_two_locals():
    src = "class T { void f(int v) {} void m() { int a = 1; int b = 2; f(a); } }"
    cands, _, _ = _cands(src, "f")
    rendered = [c.rendered for c in cands]
    assert {"a", "b", "0"} <= set(rendered)
    assert len(rendered) == len(set((c.rendered, c.holes) for c in cands))


def test_no_lambda_or_compound_candidates(corpus_units, corpus_index):
    for u in corpus_units:
        ctx = UnitContext(u, corpus_index)
        for r in extract_requests(u, ctx=ctx):
            if r.unresolved:
                continue
            for c in generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected):
                assert c.expr_type.supported


def test_soundness_on_fixture(corpus_units, corpus_index):
    """Every candidate fits an expected type and re-parses to its own expression type."""
    for u in corpus_units:
        ctx = UnitContext(u, corpus_index)
        for r in extract_requests(u, ctx=ctx):
            if r.unresolved:
                continue
            for c in generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected):
                assert any(is_compatible(c.result_type, t, corpus_index) for t in r.expected.types), \
                    (r.key, c.rendered)
                assert classify(parse_expression(c.rendered)) == c.expr_type, (r.key, c.rendered)


# ---------------------------------------------------------------- brute-force oracle

def _oracle(ctx, pos, acc, expected):
    """Independent enumeration of the depth-1 grammar, as (rendered, holes) pairs."""
    idx = ctx.index
    td = ctx.enclosing_type(pos)

    def fits(t):
        return any(is_compatible(t, e, idx) for e in expected)

    def tname(q):
        base, dims = split_array(q)
        if base in PRIMITIVES:
            return q
        simple = base.rsplit(".", 1)[-1]
        e = idx.get(base)
        if ctx.resolver.resolve_name(simple, td) == base:
            name = simple
        elif e is not None and e.outer:
            name = f"{tname(e.outer)}.{simple}"
        else:
            name = base
        return name + "[]" * dims

    def holes(n):
        return ", ".join([""] * n) if n > 1 else ""

    def inst(t, kind):
        if t in PRIMITIVES or t == NULL_TYPE:
            return []
        return [m for m in idx.members(t, kind=kind) if not m.static and ctx.can_access(m, pos)
                and (kind == "field" or m.type != "void")]

    out = set()
    for v in acc.variables:
        if fits(v.type):
            out.add((f"this.{v.name}" if v.shadowed else v.name, 0))
        if v.shadowed:
            continue
        out.update((f"{v.name}.{f.name}", 0) for f in inst(v.type, "field") if fits(f.type))
        out.update((f"{v.name}.{m.name}({holes(m.arity)})", m.arity)
                   for m in inst(v.type, "method") if fits(m.type))
        for e in expected:
            if e == v.type or e == NULL_TYPE:
                continue
            if e in PRIMITIVES or v.type in PRIMITIVES:
                ok = e in PRIMITIVES and v.type in PRIMITIVES and v.type in WIDENS_TO[e]
            else:
                ok = idx.is_subtype(e, v.type) and idx.get(e) is not None and ctx.type_accessible(e, pos)
            if ok:
                out.add((f"({tname(e)}) {v.name}", 0))
        if v.type.endswith("[]") and fits(v.type[:-2]):
            out.add((f"{v.name}[]", 1))
    out.update((f"{tname(q)}.{f.name}", 0) for q, f in acc.static_fields if fits(f.type))
    out.update((f"{m.name}({holes(m.arity)})", m.arity) for m in acc.methods
               if m.type != "void" and fits(m.type))
    out.update((f"{tname(q)}.{m.name}({holes(m.arity)})", m.arity) for q, m in acc.static_methods
               if m.type != "void" and fits(m.type))
    if fits(STRING):
        out.add((EMPTY_STRING, 0))
    num = next((t for t in ("0", "0L", "0.0f", "0.0")
                if fits({"0": "int", "0L": "long", "0.0f": "float", "0.0": "double"}[t])), None)
    if num:
        out.add((num, 0))
    if fits("char"):
        out.add(("'\\0'", 0))
    if fits("boolean"):
        out.update({("true", 0), ("false", 0)})
    if fits(NULL_TYPE):
        out.add(("null", 0))
    if "java.lang.Class" in expected:
        out.update((f"{tname(q)}.class", 0) for q in acc.static_types)
    if acc.this_available and fits(acc.this_type):
        out.add(("this", 0))
    for q in sorted(set(acc.static_types) | {e for e in expected if "[" not in e and e not in PRIMITIVES}):
        te = idx.get(q)
        if te is None or not te.instantiable or not fits(q) or not ctx.type_accessible(q, pos):
            continue
        if te.outer and "static" not in te.modifiers and te.kind == "class":
            continue
        for ctor in idx.constructors(q):
            if ctx.can_access(ctor, pos):
                out.add((f"new {tname(q)}({holes(ctor.arity)})", ctor.arity))
    for e in expected:
        base, dims = split_array(e)
        if dims == 1 and (base in PRIMITIVES or ctx.type_accessible(base, pos)):
            out.add((f"new {tname(base)}[]", 1))
    return out


def test_completeness_matches_brute_force(corpus_units, corpus_index):
    checked = 0
    for u in corpus_units:
        ctx = UnitContext(u, corpus_index)
        for r in extract_requests(u, ctx=ctx):
            if r.unresolved:
                continue
            acc = ctx.accessible(r.offset)
            got = {(c.rendered, c.holes) for c in generate_candidates(ctx, r.offset, acc, r.expected)}
            want = _oracle(ctx, r.offset, acc, r.expected.types)
            assert got == want, (r.key, sorted(got ^ want))
            checked += 1
    assert checked > 50


# ---------------------------------------------------------------- placeholders and rendering

def test_placeholderize_object_creation():
    c = placeholderize(parse_expression("new Point(1, 2)"), "Point")
    assert (c.rendered, c.holes, c.expr_type) == ("new Point(, )", 2, ExprType.ObjectCreation)


def test_placeholderize_array_access():
    c = placeholderize(parse_expression("arr[i + 1]"), "int")
    assert (c.rendered, c.holes, c.result_type) == ("arr[]", 1, "int")


def test_placeholderize_invocation():
    c = placeholderize(parse_expression('f("x")'), STRING)
    assert (c.rendered, c.holes) == ("f()", 1)


def test_placeholderize_rejects_plain_names():
    with pytest.raises(ValueError):
        placeholderize(A.Name("x"), "int")


def test_rendering_of_fields_and_defaults():
    src = ("class C { static int X = 1; } class T { int f; void g(int v) {} "
           "void use(String s) {} void m() { g(f); use(null); } }")
    cands, _, _ = _cands(src, "g")
    rendered = {render_candidate(c) for c in cands}
    assert "f" in rendered and "this.f" not in rendered
    assert "C.X" in rendered
    cands, _, _ = _cands(src, "use")
    assert '"<EMPTY_STRING>"' in {c.rendered for c in cands}


def test_shadowed_field_renders_with_this():
    src = "class T { int f; void g(int v) {} void m(int f) { g(f); } }"
    cands, _, _ = _cands(src, "g")
    rendered = {c.rendered for c in cands}
    assert {"f", "this.f"} <= rendered
