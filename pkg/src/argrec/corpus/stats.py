"""Corpus statistics on argument usage: expression types, expected data types,
uniqueness of usages and of sole arguments, and where callees and arguments
come from."""
from __future__ import annotations

import csv
import json
from collections import Counter, defaultdict
from fractions import Fraction
from pathlib import Path

from . import ast as A
from .ast import ExprType
from .exprs import render
from .requests import extract_requests
from ..candgen import generate_candidates
from ..features import candidate_parasim, gold_variable
from ..typesys.compat import NUMERIC_PRIMITIVES, is_compatible
from ..typesys.index import BOXES, OBJECT, STRING, build_type_index, split_array
from ..typesys.resolve import UnitContext

CANDIDATE_BINS = ((0, 0), (1, 9), (10, 99), (100, 999), (1000, None))
PARASIM_BINS = 10


def distribution(counter):
    """{key: {count, share}} sorted by key; shares sum to 1."""
    total = sum(counter.values())
    out = {}
    for k in sorted(counter):
        share = Fraction(counter[k], total) if total else Fraction(0)
        out[k] = {"count": counter[k], "share": float(share)}
    return out


def data_type_bucket(t, index):
    if t is None:
        return "unresolved"
    if t == OBJECT:
        return "Object"
    if t == STRING:
        return "String"
    if t in ("boolean", "java.lang.Boolean"):
        return "boolean"
    if t in NUMERIC_PRIMITIVES or t in BOXES.values():
        return "numeric"
    if t.endswith("[]"):
        return "array"
    e = index.get(t)
    if e is not None and e.source == "project":
        return "project type"
    return "library type"


def _expected_type(r, ctx):
    """The expected type for the gold argument: the one its own type fits."""
    if r.unresolved or r.expected is None:
        return None
    types = sorted(set(r.expected.types))
    if len(types) == 1 or r.gold_node is None:
        return types[0]
    gt = ctx.type_of(r.gold_node, r.offset)
    if gt is not None:
        for t in types:
            if is_compatible(gt, t, ctx.index, ctx.strict):
                return t
    return types[0]


def _argument_origin(r, ctx):
    g = r.gold_node
    if g is None:
        return None
    et = r.gold_type
    if et in A.LITERAL_TYPES:
        return "literal"
    owner = None
    if et in (ExprType.SimpleName, ExprType.QualifiedName, ExprType.FieldAccess):
        try:
            v = gold_variable(r, ctx)
        except Exception:
            v = None
        if v is not None:
            if v.kind in ("local", "param"):
                return "intra-project"
            owner = v.owner or (v.member.declared_in if v.member is not None else None)
    elif isinstance(g, A.Call):
        ms = ctx.methods_for_call(g, r.offset)[0]
        owner = ms[0].declared_in if ms else None
    elif isinstance(g, (A.New, A.NewArray, A.ClassLit, A.Cast)):
        owner = split_array(ctx.resolve_type_ref(g.type, r.offset))[0]
    elif isinstance(g, A.This):
        return "intra-project"
    elif isinstance(g, A.Index) and isinstance(g.target, A.Name):
        hit = ctx.lookup_variable(g.target.ident, r.offset)
        if hit is not None:
            kind, v = hit
            if kind == "var" and v.kind != "field":
                return "intra-project"
            owner = v.owner.qualified_name if kind == "var" else v.declared_in
    if owner is None:
        return "unknown"
    e = ctx.index.get(owner)
    return "intra-project" if e is not None and e.source == "project" else "inter-project"


def _count_calls(unit):
    n = 0
    for td in unit.all_types():
        roots = [d.init for fd in td.fields for d in fd.declarators if d.init is not None]
        roots += [m.body for m in td.methods if m.body is not None]
        for root in roots:
            n += sum(1 for x in A.walk(root) if isinstance(x, (A.Call, A.New)))
    return n


def _bin(n, bins):
    for lo, hi in bins:
        if n >= lo and (hi is None or n <= hi):
            return f"{lo}+" if hi is None else (f"{lo}" if lo == hi else f"{lo}-{hi}")
    return "?"


def corpus_stats(units, candidate_counts=False, strict=False):
    """Statistics over a parsed corpus (one type index per project)."""
    if not units:
        raise ValueError("corpus statistics need at least one unit")
    by_project = defaultdict(list)
    for u in units:
        by_project[u.project].append(u)
    expr, dtypes, top_types, callees, origins = Counter(), Counter(), Counter(), Counter(), Counter()
    usages, args, cands, psim = Counter(), Counter(), Counter(), Counter()
    calls = calls_with_args = 0
    n_requests = 0
    for proj in sorted(by_project):
        punits = sorted(by_project[proj], key=lambda u: u.path)
        index = build_type_index(punits)
        for u in punits:
            calls += _count_calls(u)
            ctx = UnitContext(u, index, strict)
            reqs = extract_requests(u, ctx=ctx)
            calls_with_args += len({id(r.call) for r in reqs})
            for r in reqs:
                n_requests += 1
                expr[r.gold_type.value if r.gold_type else "Hole"] += 1
                t = _expected_type(r, ctx)
                dtypes[data_type_bucket(t, index)] += 1
                top_types[t or "unresolved"] += 1
                if r.unresolved:
                    callees["unresolved"] += 1
                    callee = f"?.{r.callee}"
                else:
                    owner = sorted({m.declared_in for m in r.expected.overloads})[0]
                    e = index.get(owner)
                    callees["intra-project" if e is not None and e.source == "project"
                            else "inter-project"] += 1
                    callee = f"{owner}.{r.callee}"
                if r.gold_node is not None:
                    text = render(r.gold_node)
                    usages[(text, callee, r.pos)] += 1
                    args[text] += 1
                    origins[_argument_origin(r, ctx)] += 1
                    if not r.unresolved:
                        names = [e.param_name for e in r.expected.entries]
                        v, _ = candidate_parasim(_TextOnly(text), names)
                        psim[min(int(v * PARASIM_BINS), PARASIM_BINS - 1)] += 1
                if candidate_counts and r.supported:
                    n = len(generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected))
                    cands[_bin(n, CANDIDATE_BINS)] += 1
    n_usages = sum(usages.values())
    uniq_usages = sum(c for c in usages.values() if c == 1)
    uniq_args = sum(c for c in args.values() if c == 1)
    doc = {
        "units": len(units), "projects": len(by_project), "requests": n_requests,
        "calls": calls, "callsWithArguments": calls_with_args,
        "distributions": {
            "exprType": distribution(expr),
            "expectedDataType": distribution(dtypes),
            "calleeOrigin": distribution(callees),
            "argumentOrigin": distribution(origins),
            "parasim": distribution(Counter({f"{b / PARASIM_BINS:.1f}-{(b + 1) / PARASIM_BINS:.1f}": n
                                             for b, n in psim.items()})),
        },
        "topExpectedTypes": [[t, n] for t, n in sorted(top_types.items(),
                                                         key=lambda x: (-x[1], x[0]))[:10]],
        "uniqueness": {
            "usages": float(Fraction(uniq_usages, n_usages)) if n_usages else 0.0,
            "arguments": float(Fraction(uniq_args, n_usages)) if n_usages else 0.0,
            "usageCount": n_usages,
        },
    }
    if candidate_counts:
        doc["distributions"]["validCandidates"] = distribution(cands)
    return doc


class _TextOnly:
    """Just enough of a Candidate for parasim on gold text."""

    def __init__(self, text):
        self.rendered = text


def write_stats(doc, out_dir):
    """stats.json plus one CSV per distribution."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "stats.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    written = ["stats.json"]
    for name, dist in sorted(doc["distributions"].items()):
        fn = f"stats-{name}.csv"
        with open(out / fn, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["key", "count", "share"])
            for k, v in dist.items():
                w.writerow([k, v["count"], repr(v["share"])])
        written.append(fn)
    return written
