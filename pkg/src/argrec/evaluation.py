"""Gold matching, exact metrics and the three evaluation scenarios."""
from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .corpus.ast import LITERAL_TYPES, ExprType
from .corpus.exprs import count_holes, placeholder_shape, render, strip_this
from .corpus.loader import SplitError
from .corpus.requests import extract_requests
from .lm import lm_tokens
from .pipeline import Recommender, RecommendError
from .typesys.index import build_type_index
from .typesys.resolve import UnitContext

KS = (1, 3, 5, 10)
SCENARIOS = ("static", "dynamic", "maintenance")
_PLACEHOLDER_TYPES = {ExprType.ObjectCreation, ExprType.ArrayCreation, ExprType.ArrayAccess,
                      ExprType.MethodInvocation}


class MetricError(ValueError):
    pass




# ---------------------------------------------------------------- matching

def matches_gold(c, gold_node, gold_type):
    """Whether candidate `c` counts as the gold argument."""
    if gold_node is None or gold_type is None:
        return False
    if c.expr_type in LITERAL_TYPES and c.expr_type == gold_type:
        return True  # default-value rule: literal values themselves are not predictable
    text = render(gold_node)
    if c.rendered == text:
        return True
    if text.startswith("this.") and c.rendered == strip_this(text):
        v = c.variable
        # `this.f` and `f` denote the same field unless `f` is a local
        if v is None or v.kind not in ("local", "param"):
            return True
    if c.rendered.startswith("this.") and strip_this(c.rendered) == text:
        # a candidate spelled `this.f` equals gold `f` unless a local hides the field
        v = c.variable
        if v is None or not v.shadowed:
            return True
    if gold_type in _PLACEHOLDER_TYPES and c.expr_type == gold_type:
        shape = placeholder_shape(gold_node)
        if shape is not None and count_holes(shape) == c.holes:
            st = render(shape)
            if c.rendered in (st, strip_this(st)):
                return True
    return False


def gold_rank(items, r):
    """1-based rank of the first item matching the gold, or None."""
    for i, it in enumerate(items, 1):
        c = getattr(it, "candidate", it)
        if matches_gold(c, r.gold_node, r.gold_type):
            return i
    return None


# ---------------------------------------------------------------- metrics

def ratio(num, den):
    """(exact value, defined?) with 0 for an empty denominator."""
    if den == 0:
        return Fraction(0), False
    return Fraction(num, den), True


def _check(r_k, s, a):
    if not 0 <= s <= a:
        raise MetricError(f"need 0 <= S <= A, got S={s}, A={a}")
    if not 0 <= r_k <= s:
        raise MetricError(f"need 0 <= R(k) <= S, got R(k)={r_k}, S={s}")


def precision_at_k(r_k, s, a):
    _check(r_k, s, a)
    return ratio(r_k, s)[0]


def recall_at_k(r_k, s, a):
    _check(r_k, s, a)
    return ratio(r_k, a)[0]


def mrr(ranks, a=None):
    """Mean reciprocal rank over the full test set; None marks a miss."""
    a = len(ranks) if a is None else a
    if a == 0:
        return Fraction(0)
    return sum((Fraction(1, k) for k in ranks if k is not None), Fraction(0)) / a


@dataclass
class Tally:
    """Counts for one slice of requests."""
    a: int = 0
    s: int = 0
    identified: int = 0
    ranks: list = field(default_factory=list)  # rank or None, one per request

    def add(self, supported, rank, identified=False):
        self.a += 1
        if supported:
            self.s += 1
            self.identified += bool(identified)
        self.ranks.append(rank if supported else None)

    def hits(self, k):
        return sum(1 for x in self.ranks if x is not None and x <= k)

    def to_json(self, ks=KS):
        out = {"A": self.a, "S": self.s, "identified": self.identified, "R": {}, "precision": {},
               "recall": {}, "topK": {}, "exact": {}, "undefined": []}
        for k in ks:
            rk = self.hits(k)
            p, p_ok = ratio(rk, self.s)
            rc, r_ok = ratio(rk, self.a)
            _check(rk, self.s, self.a)
            out["R"][str(k)] = rk
            out["precision"][str(k)] = float(p)
            out["recall"][str(k)] = float(rc)
            out["topK"][str(k)] = float(rc)
            out["exact"][f"precision@{k}"] = str(p)
            out["exact"][f"recall@{k}"] = str(rc)
            if not p_ok and "S" not in out["undefined"]:
                out["undefined"].append("S")
            if not r_ok and "A" not in out["undefined"]:
                out["undefined"].append("A")
        m = mrr(self.ranks, self.a)
        out["mrr"] = float(m)
        out["exact"]["mrr"] = str(m)
        ident, _ = ratio(self.identified, self.s)
        out["identification"] = float(ident)
        return out


@dataclass
class EvalReport:
    scenario: str
    total: Tally = field(default_factory=Tally)
    by_type: dict = field(default_factory=lambda: defaultdict(Tally))
    by_origin: dict = field(default_factory=lambda: defaultdict(Tally))
    latencies: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    requests: list = field(default_factory=list)  # per-request records when kept

    def add(self, r, rank, identified, origin):
        sup = r.supported
        self.total.add(sup, rank, identified)
        key = r.gold_type.value if r.gold_type is not None else "Hole"
        self.by_type[key].add(sup, rank, identified)
        self.by_origin[origin].add(sup, rank, identified)

    @property
    def mean_latency_ms(self):
        return 1000 * sum(self.latencies) / len(self.latencies) if self.latencies else 0.0

    def to_json(self, timing=False):
        doc = {"scenario": self.scenario, "metrics": self.total.to_json(),
               "byExprType": {k: self.by_type[k].to_json() for k in sorted(self.by_type)},
               "byCalleeOrigin": {k: self.by_origin[k].to_json() for k in sorted(self.by_origin)},
               "warnings": sorted(set(self.warnings))}
        if timing:
            doc["meanLatencyMs"] = self.mean_latency_ms
        if self.requests:
            doc["requests"] = self.requests
        return doc


def callee_origin(r, index):
    """intra-project, inter-project (library) or unresolved."""
    if r.unresolved or r.expected is None or not r.expected.overloads:
        return "unresolved"
    owners = {m.declared_in for m in r.expected.overloads}
    for q in sorted(owners):
        e = index.get(q)
        if e is not None and e.source == "project":
            return "intra-project"
    return "inter-project"


# ---------------------------------------------------------------- scenarios

def lex_to_lm_offsets(tokens):
    """offsets[i] = index in the LM stream where lexical token i starts."""
    offs, n = [], 0
    for t in tokens:
        offs.append(n)
        n += len(lm_tokens([t]))
    offs.append(n)
    return offs


class FileSession:
    """Feeds a file's prefix into the model's file cache as requests advance."""

    def __init__(self, model, unit):
        self.model = model
        self.path = unit.path
        self.stream = lm_tokens(unit.tokens)
        self.offs = lex_to_lm_offsets(unit.tokens)
        self.seen = 0
        model.clear_cache(self.path)

    def advance(self, lex_pos):
        end = self.offs[lex_pos]
        if end > self.seen:
            self.model.update_cache(self.path, self.stream, self.seen, end)
            self.seen = end

    def close(self):
        self.model.clear_cache(self.path)


def _check_split(trained, test_units):
    overlap = sorted(set(trained.files) & {u.path for u in test_units})
    if overlap:
        raise SplitError(f"test files were used for training: {', '.join(overlap)}")


def evaluate(trained, test_units, scenario="static", cfg=None, keep_requests=False,
             strict=None, index=None):
    """Run every request of the test units through the pipeline.

    static: frozen model. dynamic: the file cache sees the file's code before
    each request. maintenance: dynamic, plus the model is trained on every
    other test file.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    _check_split(trained, test_units)
    strict = trained.options.strict if strict is None else strict
    cfg = cfg or trained.config()
    if index is None:
        index = build_type_index(test_units, [trained.types_doc])
    streams = {u.path: (u.package, lm_tokens(u.tokens)) for u in test_units}
    report = EvalReport(scenario)
    for u in sorted(test_units, key=lambda u: u.path):
        ctx = UnitContext(u, index, strict)
        model = trained.model if scenario == "static" else trained.model.clone()
        if scenario == "maintenance":
            others = [streams[p] for p in sorted(streams) if p != u.path]
            model.extend_vocab([toks for _, toks in others])
            for pkg, toks in others:
                model.add_stream(pkg, toks)
        rec = Recommender(model, trained.tables, cfg)
        session = FileSession(model, u) if scenario != "static" else None
        for r in extract_requests(u, ctx=ctx):
            rank, identified = None, False
            if session is not None:
                session.advance(r.offset)
            if r.supported:
                t0 = time.perf_counter()
                try:
                    cands, ranked = rec.run(r, ctx)
                except RecommendError as exc:
                    report.warnings.append(str(exc))
                    cands, ranked = [], None
                report.latencies.append(time.perf_counter() - t0)
                identified = any(matches_gold(c, r.gold_node, r.gold_type) for c in cands)
                if ranked is not None:
                    rank = gold_rank(ranked.items, r)
                    report.warnings.extend(ranked.warnings)
            report.add(r, rank, identified, callee_origin(r, index))
            if keep_requests:
                report.requests.append({"key": r.key, "gold": r.gold_text,
                                        "exprType": r.gold_type.value if r.gold_type else None,
                                        "supported": r.supported, "rank": rank,
                                        "identified": identified, "reason": r.reason})
        if session is not None:
            session.close()
    return report
