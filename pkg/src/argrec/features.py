"""Static recommending features: parameter-name similarity, creating-distance,
accessing-recentness, and the empirical recentness tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .corpus.lexer import ParseError, tokenize
from .corpus.scopes import scope_distance
from .corpus.subtokens import split_subtokens

DEFAULT_X = Fraction(1, 10)
DEFAULT_CAP = 16


def com_terms(a, b):
    """Terms of `a`, in order, that occur somewhere in `b`.

    The longest subsequence of `a` whose elements all occur in `b` is exactly
    this filtered sequence, so no search is needed.
    """
    bs = set(b)
    return [t for t in a if t in bs]


def terms_of_text(text):
    """Sub-tokens of the identifiers in a rendered expression (literals dropped)."""
    try:
        toks = tokenize(text)
    except ParseError:
        return split_subtokens(text)
    out = []
    for t in toks:
        if t.kind == "ident":
            out.extend(split_subtokens(t.text))
    return out


def parasim_terms(tc, tp):
    if not tc or not tp:
        return Fraction(0)
    return Fraction(len(com_terms(tc, tp)) + len(com_terms(tp, tc)), len(tc) + len(tp))


def parasim(c, p):
    """Similarity in [0, 1] between a candidate's text and a parameter name."""
    return parasim_terms(terms_of_text(c), split_subtokens(p))


def normalize_parasim(v, x=DEFAULT_X):
    return x + v * (1 - x)


# ---------------------------------------------------------------- distances

def variable_block(var, ctx, pos):
    """Block B where a variable candidate is considered created.

    Locals and parameters: their declaring block. Fields of the enclosing
    classes: the method body (it contains every block of the method).
    Static members of other types: the outermost block.
    """
    if var.kind in ("local", "param"):
        return var.variable.block
    if var.kind == "global":
        return ctx.scopes.root
    mb = ctx.scopes.method_block(pos)
    if mb is not None:
        return mb
    cb = ctx.scopes.class_block(pos)
    return cb if cb is not None else ctx.scopes.root


def creating_distance(var, r, ctx):
    """Parent links from the block holding the call up to the creating block."""
    inner = ctx.scopes.innermost(r.offset)
    b = variable_block(var, ctx, r.offset)
    d = scope_distance(b, inner)
    if d is None:
        raise ValueError(f"{var.name} is not accessible at {r.key}")
    return d


def accessing_recentness(var, r, unit=None):
    """Lines between the call and the latest prior mention of the variable in
    the containing method; None if it is not mentioned there."""
    unit = unit or r.unit
    m = r.method
    if m is None:
        return None
    toks = unit.tokens
    call_line = toks[r.callee_index].line
    owner_simple = var.owner.rsplit(".", 1)[-1] if var.owner else None
    last = None
    for i in range(max(m.start, 0), min(r.offset, len(toks))):
        t = toks[i]
        if t.kind != "ident" or t.text != var.name:
            continue
        if i > 0 and toks[i - 1].text == "." and toks[i - 1].kind == "op":
            before = toks[i - 2].text if i > 1 else ""
            if var.kind in ("local", "param"):
                continue
            if before != "this" and before != owner_simple:
                continue
        last = t.line
    return None if last is None else abs(call_line - last)


# ---------------------------------------------------------------- tables

@dataclass
class RecentnessTables:
    """Add-one smoothed distributions over bucketed distances.

    Buckets 0..cap, one overflow bucket, and for recentness a NULL bucket.
    """
    count_d: list
    count_u: list
    cap: int = DEFAULT_CAP

    @property
    def null_bucket(self):
        return self.cap + 2

    def bucket(self, v):
        if v is None:
            return self.null_bucket
        return min(v, self.cap + 1)

    def _prob(self, counts, b):
        return Fraction(counts[b] + 1, sum(counts) + len(counts))

    def prob_d(self, d):
        return self._prob(self.count_d, min(d, self.cap + 1))

    def prob_u(self, u):
        return self._prob(self.count_u, self.bucket(u))

    def table_d(self):
        return [self._prob(self.count_d, b) for b in range(len(self.count_d))]

    def table_u(self):
        return [self._prob(self.count_u, b) for b in range(len(self.count_u))]

    def to_json(self):
        return {"cap": self.cap, "countD": list(self.count_d), "countU": list(self.count_u),
                "smoothing": "add-one", "buckets": "0..cap, overflow, null(U only)"}

    @classmethod
    def from_json(cls, doc):
        return cls(list(doc["countD"]), list(doc["countU"]), doc["cap"])


def fit_recentness_tables(observations, cap=DEFAULT_CAP):
    """Fit tables from (creating-distance, accessing-recentness or None) pairs."""
    obs = list(observations)
    if not obs:
        raise ValueError("no variable arguments to fit recentness tables from")
    cd = [0] * (cap + 2)
    cu = [0] * (cap + 3)
    t = RecentnessTables(cd, cu, cap)
    for d, u in obs:
        cd[min(d, cap + 1)] += 1
        cu[t.bucket(u)] += 1
    return t


def recent_score(d, u, tables):
    return tables.prob_d(d) * tables.prob_u(u)


@dataclass
class FeatureVector:
    parasim_raw: Fraction
    parasim_norm: Fraction
    create_dis: Optional[int] = None
    access_rec: Optional[int] = None
    is_variable: bool = False
    param_name: str = ""
    recent: Optional[Fraction] = None
    extra: dict = field(default_factory=dict)


def candidate_parasim(c, names):
    """Max similarity over the parameter names of the compatible overloads."""
    tc = terms_of_text(c.rendered)
    best, best_name = Fraction(0), names[0] if names else ""
    for p in names:
        v = parasim_terms(tc, split_subtokens(p))
        if v > best:
            best, best_name = v, p
    return best, best_name


def compute_features(c, r, ctx, names, tables=None, x=DEFAULT_X):
    raw, pname = candidate_parasim(c, names)
    fv = FeatureVector(raw, normalize_parasim(raw, x), is_variable=c.is_variable, param_name=pname)
    if c.is_variable:
        fv.create_dis = creating_distance(c.variable, r, ctx)
        fv.access_rec = accessing_recentness(c.variable, r, ctx.unit)
        if tables is not None:
            fv.recent = recent_score(fv.create_dis, fv.access_rec, tables)
    return fv


def gold_variable(r, ctx, acc=None):
    """The accessible variable a gold argument names, or None.

    Covers `x`, `this.f` and `Type.F`; anything else is not a variable use.
    """
    from .corpus import ast as A
    from .typesys.resolve import AccessibleVar

    g = r.gold_node
    if isinstance(g, A.Name):
        acc = acc or ctx.accessible(r.offset)
        for v in acc.variables:
            if v.name == g.ident and not v.shadowed:
                return v
        return None
    if not isinstance(g, A.Select):
        return None
    if isinstance(g.target, A.This) and g.target.qualifier is None:
        acc = acc or ctx.accessible(r.offset)
        for v in acc.variables:
            if v.name == g.ident and v.kind == "field":
                return v
        return None
    q = ctx.static_ref(g.target, r.offset)
    if q is None:
        return None
    for f in ctx.index.members(q, g.ident, "field"):
        if f.static:
            return AccessibleVar(f.name, f.type, "global", True, q, member=f)
    return None


def recentness_observations(requests, ctx):
    """(creating-distance, accessing-recentness) for each variable gold argument."""
    out = []
    for r in requests:
        if r.unresolved or r.gold_node is None:
            continue
        v = gold_variable(r, ctx)
        if v is None:
            continue
        try:
            d = creating_distance(v, r, ctx)
        except ValueError:
            continue
        out.append((d, accessing_recentness(v, r, ctx.unit)))
    return out
