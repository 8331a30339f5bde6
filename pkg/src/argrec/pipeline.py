"""Three-stage recommendation: rule-based reduction, light ranking to the top
RT, then selective heavy/light probability combined with static features."""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .candgen import generate_candidates
from .corpus import ast as A
from .corpus.ast import ExprType
from .corpus.exprs import render
from .features import (DEFAULT_X, accessing_recentness, creating_distance, candidate_parasim,
                       normalize_parasim, recent_score, terms_of_text)
from .lm import lm_tokens, text_tokens
from .typesys.compat import is_common_type, is_compatible

log = logging.getLogger(__name__)

DEFAULT_E = frozenset({ExprType.SimpleName, ExprType.ArrayAccess, ExprType.TypeLiteral,
                       ExprType.ObjectCreation, ExprType.ArrayCreation})
_BOUNDARY = re.compile(r"(^|_)(MAX|MIN)(_|$)|^(max|min)[A-Z0-9_]|^(max|min)$")


class RecommendError(Exception):
    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind
        self.message = message

    def to_json(self):
        return {"type": self.kind, "message": self.message}


@dataclass
class PipelineConfig:
    rt: Optional[int] = 20  # None keeps every survivor
    e_set: frozenset = DEFAULT_E
    heavy: object = None  # scorer with .score(context, candidate token lists)
    rules: bool = True
    static_features: bool = True
    heavy_stage: bool = True
    x: Fraction = DEFAULT_X
    object_mapping: bool = False
    depth: int = 1
    heavy_window: int = 64  # context tokens sent to the heavy scorer

    def __post_init__(self):
        if self.rt is not None and self.rt < 1:
            raise ValueError("RT must be >= 1")
        bad = [t for t in self.e_set if not ExprType(t).supported]
        if bad:
            raise ValueError(f"E may only hold supported expression types, got {bad}")
        self.e_set = frozenset(ExprType(t) for t in self.e_set)


@dataclass
class RankedItem:
    candidate: object
    score: float
    p: float
    p_lr: float
    parasim: Fraction
    parasim_norm: Fraction
    param_name: str = ""
    create_dis: Optional[int] = None
    access_rec: Optional[int] = None
    recent: Optional[Fraction] = None
    rules: tuple = ()
    heavy: bool = False
    lr_score: float = 0.0

    @property
    def rendered(self):
        return self.candidate.rendered

    def sort_key(self):
        return (-self.score, self.candidate.rendered, self.candidate.holes)

    def to_json(self):
        c = self.candidate
        return {
            "rendered": c.rendered, "exprType": c.expr_type.value, "resultType": c.result_type,
            "holes": c.holes, "score": self.score,
            "diagnostics": {
                "p": self.p, "pLight": self.p_lr, "heavy": self.heavy,
                "parasim": float(self.parasim), "parasimNorm": float(self.parasim_norm),
                "paramName": self.param_name, "createDis": self.create_dis,
                "accessRec": self.access_rec,
                "recent": float(self.recent) if self.recent is not None else None,
                "rules": list(self.rules), "isVariable": c.is_variable,
            },
        }


@dataclass
class RankedList:
    items: list
    total_candidates: int = 0
    reduced: int = 0
    warnings: list = field(default_factory=list)

    def rendered(self):
        return [i.rendered for i in self.items]

    def to_json(self):
        return {"candidates": [i.to_json() for i in self.items],
                "generated": self.total_candidates, "afterRules": self.reduced,
                "warnings": list(self.warnings)}


def combine(p, pn, recent, is_variable):
    """(P * parasimNorm * recent^v)^(1/(1+v)), v = 1 for variables."""
    if is_variable:
        return math.sqrt(float(p) * float(pn) * float(recent))
    return float(p) * float(pn)


final_score = combine


# ---------------------------------------------------------------- reduction

def _subtokens_of(text):
    return set(terms_of_text(text)) if text else set()


def _access_events(ctx):
    """(token index, type) for every `X.member` where X is a type or a variable."""
    events = getattr(ctx, "_access_events", None)
    if events is not None:
        return events
    events = []
    toks = ctx.unit.tokens
    for i in range(len(toks) - 1):
        t = toks[i]
        if t.kind != "ident" or toks[i + 1].text != "." or (i > 0 and toks[i - 1].text == "."):
            continue
        hit = ctx.lookup_variable(t.text, i)
        if hit is not None:
            kind, v = hit
            q = ctx.var_type(v) if kind == "var" else v.type
        else:
            q = ctx.resolver.resolve_name(t.text, ctx.enclosing_type(i))
        if q is not None:
            events.append((i, q))
    ctx._access_events = events
    return events


def accessed_types(ctx, pos):
    """Types whose members were accessed before token `pos`."""
    return {q for i, q in _access_events(ctx) if i < pos}


class RuleContext:
    def __init__(self, r, ctx):
        self.r = r
        self.ctx = ctx
        call = r.call
        words = []
        if isinstance(call, A.Call):
            words.append(call.ident)
            if call.target is not None:
                words.append(render(call.target))
        else:
            words.append(call.type.name)
        rt = r.expected.receiver_type if r.expected is not None else None
        if rt:
            words.append(rt.rsplit(".", 1)[-1])
        m = r.method
        if m is not None and not m.name.startswith("<"):
            words.append(m.name)
        self.request_terms = set()
        for w in words:
            self.request_terms |= _subtokens_of(w)
        self.accessed = accessed_types(ctx, r.offset)
        self.enclosing_ancestors = set()
        for td in ctx.type_chain(r.offset):
            self.enclosing_ancestors.update(ctx.index.ancestors(td.qualified_name))
        self.package = ctx.unit.package


def rules_fired(c, rc):
    fired = []
    if set(terms_of_text(c.rendered)) & rc.request_terms:
        fired.append("shared-subtoken")
    if c.owner_type in rc.accessed:
        fired.append("recently-used-class")
    if c.member is not None and c.member.kind == "field" and _BOUNDARY.search(c.member.name):
        fired.append("boundary")
    if c.owner_type in rc.enclosing_ancestors:
        fired.append("enclosing-member")
    owner = rc.ctx.index.get(c.owner_type) if c.owner_type else None
    if owner is not None and owner.package == rc.package:
        fired.append("same-package")
    return fired


def rule_target(c, expected_types, index, strict=False):
    """Rules only constrain static-member candidates aimed at common types."""
    if not c.static_member:
        return False
    return any(is_common_type(e) and is_compatible(c.result_type, e, index, strict)
               for e in expected_types)


def apply_reduction_rules(cands, r, ctx):
    """(kept candidates, {candidate key: rules fired})."""
    rc = RuleContext(r, ctx)
    types = r.expected.types
    kept, fired = [], {}
    for c in cands:
        if not rule_target(c, types, ctx.index, ctx.strict):
            kept.append(c)
            continue
        f = rules_fired(c, rc)
        fired[c.key] = tuple(f)
        if f:
            kept.append(c)
    return kept, fired


# ---------------------------------------------------------------- ranking

def context_tokens(r):
    """LM tokens of the containing class up to the request position."""
    td = r.type_decl
    start = 0
    if td is not None:
        while td.outer is not None:
            td = td.outer
        start = td.start
    return lm_tokens(r.unit.tokens[start:r.offset])


def candidate_tokens(c):
    return text_tokens(c.rendered)


class Scorer:
    """Light-model and feature scoring for one request."""

    def __init__(self, r, ctx, model, tables, cfg):
        self.r = r
        self.ctx = ctx
        self.model = model
        self.tables = tables
        self.cfg = cfg
        self.context = context_tokens(r)
        self.package = r.unit.package
        self.path = r.unit.path

    def p_light(self, c):
        return self.model.sequence_prob(self.context, candidate_tokens(c), self.package, self.path)

    def names_for(self, c):
        return [e.param_name for e in self.r.expected.entries
                if is_compatible(c.result_type, e.type, self.ctx.index, self.ctx.strict)]

    def item(self, c, p_lr):
        names = self.names_for(c)
        raw, pname = candidate_parasim(c, names)
        pn = normalize_parasim(raw, self.cfg.x)
        it = RankedItem(c, 0.0, p_lr, p_lr, raw, pn, pname)
        if c.is_variable:
            it.create_dis = creating_distance(c.variable, self.r, self.ctx)
            it.access_rec = accessing_recentness(c.variable, self.r, self.ctx.unit)
            it.recent = recent_score(it.create_dis, it.access_rec, self.tables)
        it.score = self.score(it, p_lr)
        it.lr_score = it.score
        return it

    def score(self, it, p):
        if not self.cfg.static_features:
            return float(p)
        return combine(p, it.parasim_norm, it.recent, it.candidate.is_variable)


def light_rank(items, rt):
    ordered = sorted(items, key=RankedItem.sort_key)
    return ordered if rt is None else ordered[:rt]


def selective(items, scorer, cfg, warnings):
    """Swap in heavy probabilities for candidates whose type is in E."""
    heavy = cfg.heavy if cfg.heavy_stage else None
    if heavy is None:
        return items
    chosen = [it for it in items if it.candidate.expr_type in cfg.e_set]
    if not chosen:
        return items
    ctx = scorer.context[-cfg.heavy_window:]
    try:
        probs = heavy.score(ctx, [candidate_tokens(it.candidate) for it in chosen])
        if len(probs) != len(chosen) or not all(0 < float(p) <= 1 for p in probs):
            raise ValueError("heavy scorer returned malformed scores")
    except Exception as exc:  # availability over precision
        warnings.append(f"heavy scorer failed ({exc}); light model used")
        log.warning("heavy scorer failed: %s", exc)
        return items
    for it, p in zip(chosen, probs):
        it.p = float(p)
        it.heavy = True
        it.score = scorer.score(it, it.p)
    return items


class Recommender:
    def __init__(self, model, tables, cfg=None):
        self.model = model
        self.tables = tables
        self.cfg = cfg or PipelineConfig()

    def candidates(self, r, ctx):
        if r.expected is None:
            from .corpus.requests import resolve_request
            resolve_request(r, ctx)
        if r.unresolved:
            raise RecommendError("unresolvable", f"{r.callee} at {r.key}: {r.reason}")
        expected = r.expected
        if self.cfg.object_mapping:
            expected = ctx.map_object_to_type_param(r.call, expected, r.offset)
        acc = ctx.accessible(r.offset)
        return generate_candidates(ctx, r.offset, acc, expected, self.cfg.depth)

    def run(self, r, ctx):
        """(all valid candidates, RankedList of every survivor)."""
        all_cands = self.candidates(r, ctx)
        cands = all_cands
        out = RankedList([], len(cands))
        fired = {}
        if self.cfg.rules:
            cands, fired = apply_reduction_rules(cands, r, ctx)
        out.reduced = len(cands)
        scorer = Scorer(r, ctx, self.model, self.tables, self.cfg)
        items = []
        for c in cands:
            it = scorer.item(c, scorer.p_light(c))
            it.rules = fired.get(c.key, ())
            items.append(it)
        survivors = light_rank(items, self.cfg.rt)
        survivors = selective(survivors, scorer, self.cfg, out.warnings)
        survivors.sort(key=RankedItem.sort_key)
        out.items = survivors
        return all_cands, out

    def recommend(self, r, ctx, k=10):
        out = self.run(r, ctx)[1]
        if k is not None:
            out.items = out.items[:k]
        return out


def beam_baseline(r, model, k=10, width=10, max_len=8):
    """Whole-argument construction by beam search; no validity filtering."""
    ctx = context_tokens(r)
    res = model.beam_search(ctx, k, max(width, k), max_len, r.unit.package, r.unit.path)
    out = []
    for p, seq in res:
        out.append({"tokens": list(seq), "text": " ".join(seq), "score": p})
    return out
