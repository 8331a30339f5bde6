import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from argrec import bundle as B
from argrec.candgen import generate_candidates
from argrec.corpus.ast import ExprType
from argrec.corpus.parser import parse_unit
from argrec.corpus.requests import extract_requests
from argrec.pipeline import (PipelineConfig, RankedItem, Recommender, RecommendError,
                             apply_reduction_rules, beam_baseline, combine, light_rank, rule_target)
from argrec.typesys.index import build_type_index
from argrec.typesys.resolve import UnitContext

CONSTANTS = """package ui;
public class Constants {
  public static int COLOR_TAB_BACKGROUND = 1;
  public static int UNRELATED_THING = 2;
}
"""
FOO = """package other;
public class Foo { public static int BAR_BAZ = 3; }
"""
PAINTER = """package app;
import ui.Constants;
import other.Foo;
class Painter {
  int width;
  void draw(int v) {}
  boolean isBackgroundDrawing() { draw(width); return true; }
}
"""


def _ctx(sources):
    units = [parse_unit(s, f"F{i}.java") for i, s in enumerate(sources)]
    return units, build_type_index(units)


def _request(units, index, callee, path="F0.java"):
    u = next(u for u in units if u.path == path)
    ctx = UnitContext(u, index)
    r = next(r for r in extract_requests(u, ctx=ctx) if r.callee == callee)
    return r, ctx


# ---------------------------------------------------------------- scoring

def test_combine_examples():
    want = math.sqrt(0.08)
    assert combine(0.5, Fraction(4, 5), Fraction(1, 5), True) == pytest.approx(want, abs=1e-15)
    assert combine(0.5, Fraction(4, 5), None, False) == pytest.approx(0.4, abs=1e-15)
    assert combine(1.0, Fraction(1), None, False) == 1.0


def _item(name, score):
    class C:
        rendered = name
        holes = 0
    return RankedItem(C(), score, score, score, Fraction(0), Fraction(1))


def test_rt_one_keeps_best():
    kept = light_rank([_item("b", math.sqrt(0.08)), _item("a", 0.4)], 1)
    assert [i.rendered for i in kept] == ["a"]
    assert len(light_rank([_item("x", 0.1)], 20)) == 1


def test_ties_break_on_rendered_text():
    kept = light_rank([_item("b", 0.5), _item("a", 0.5)], None)
    assert [i.rendered for i in kept] == ["a", "b"]


@given(st.lists(st.tuples(st.floats(1e-6, 1), st.fractions(Fraction(1, 10), 1),
                          st.fractions(Fraction(1, 1000), 1)), min_size=2, max_size=8),
       st.floats(1e-3, 1), st.booleans())
def test_argmax_invariant_under_common_scaling(rows, c, variable):
    """Within one exponent class, scaling every P by c keeps the order."""
    base = [combine(p, pn, rec, variable) for p, pn, rec in rows]
    scaled = [combine(p * c, pn, rec, variable) for p, pn, rec in rows]
    for i in range(len(rows)):
        for j in range(len(rows)):
            if base[i] > base[j] * (1 + 1e-9):
                assert scaled[i] >= scaled[j]


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(rt=0)
    with pytest.raises(ValueError):
        PipelineConfig(e_set={ExprType.LambdaExpr})


# ---------------------------------------------------------------- reduction rules

def test_reduction_rule_examples():
    units, index = _ctx([PAINTER, CONSTANTS, FOO])
    r, ctx = _request(units, index, "draw")
    cands = generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected)
    kept, fired = apply_reduction_rules(cands, r, ctx)
    kept_r = {c.rendered for c in kept}
    assert "Constants.COLOR_TAB_BACKGROUND" in kept_r
    assert "shared-subtoken" in fired[("Constants.COLOR_TAB_BACKGROUND", 0)]
    assert "Integer.MAX_VALUE" in kept_r
    assert "boundary" in fired[("Integer.MAX_VALUE", 0)]
    assert "Foo.BAR_BAZ" not in kept_r
    assert "Constants.UNRELATED_THING" not in kept_r
    assert "width" in kept_r


def test_rules_touch_only_static_members(corpus_units, corpus_index):
    for u in corpus_units:
        ctx = UnitContext(u, corpus_index)
        for r in extract_requests(u, ctx=ctx):
            if not r.supported:
                continue
            cands = generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected)
            kept, _ = apply_reduction_rules(cands, r, ctx)
            kept_keys = {c.key for c in kept}
            for c in cands:
                if c.variable is not None and c.variable.kind in ("local", "param", "field"):
                    assert c.key in kept_keys
                if c.key not in kept_keys:
                    assert rule_target(c, r.expected.types, corpus_index)


# ---------------------------------------------------------------- selective heavy scoring

class FixedHeavy:
    def __init__(self, p=0.9):
        self.p = p
        self.calls = 0

    def score(self, context, candidates):
        self.calls += 1
        return [self.p] * len(candidates)

    def close(self):
        pass


class BrokenHeavy(FixedHeavy):
    def score(self, context, candidates):
        raise RuntimeError("scorer down")


SELECT = """class T {
  int count;
  int other;
  void take(int n) {}
  void m(T t, int local) { take(local); }
}
"""


def _run(heavy):
    units, index = _ctx([SELECT])
    r, ctx = _request(units, index, "take")
    trained = B.train(units, index=index)
    rec = Recommender(trained.model, trained.tables, trained.config(heavy=heavy))
    return rec.run(r, ctx)[1]


def test_selective_uses_heavy_for_e_types_only():
    out = _run(FixedHeavy(0.9))
    by = {it.rendered: it for it in out.items}
    assert by["local"].heavy and by["local"].p == 0.9
    assert not by["t.count"].heavy and by["t.count"].p == by["t.count"].p_lr
    assert not out.warnings


def test_heavy_off_uses_light_everywhere():
    out = _run(None)
    assert all(not it.heavy and it.p == it.p_lr for it in out.items)


def test_heavy_failure_falls_back_with_warning():
    out = _run(BrokenHeavy())
    assert all(not it.heavy for it in out.items)
    assert any("heavy scorer failed" in w for w in out.warnings)


def test_scores_positive_and_sorted():
    out = _run(FixedHeavy(0.5))
    scores = [it.score for it in out.items]
    assert all(0 < s <= 1 for s in scores)
    keys = [it.sort_key() for it in out.items]
    assert keys == sorted(keys)


# ---------------------------------------------------------------- recommend

NETBEANS = """package lexer;
class Token { String image; String getImage() { return image; } }
class Builder {
  void append(String s) {}
  void build(Token tokenID) {
    append(tokenID.getImage());
  }
}
"""


def test_gold_present_in_recommendations():
    units, index = _ctx([NETBEANS])
    r, ctx = _request(units, index, "append")
    trained = B.train(units, index=index)
    out = Recommender(trained.model, trained.tables, trained.config()).recommend(r, ctx, k=None)
    assert "tokenID.getImage()" in out.rendered()


def test_k_larger_than_survivors_and_determinism(corpus_trained, corpus_units, corpus_index):
    u = corpus_units[0]
    ctx = UnitContext(u, corpus_index)
    r = next(r for r in extract_requests(u, ctx=ctx) if r.supported)
    rec = Recommender(corpus_trained.model, corpus_trained.tables, corpus_trained.config())
    a = rec.recommend(r, ctx, k=10 ** 6)
    b = rec.recommend(r, ctx, k=10 ** 6)
    assert len(a.items) == a.reduced or len(a.items) == corpus_trained.options.rt
    assert a.to_json() == b.to_json()


def test_unresolvable_request_is_structured_error():
    units, index = _ctx(["class T { void m(Q q) { q.zap(1); } }"])
    r, ctx = _request(units, index, "zap")
    rec = Recommender(B.train(units, index=index).model, B.empty_tables(), PipelineConfig())
    with pytest.raises(RecommendError) as exc:
        rec.recommend(r, ctx)
    assert exc.value.to_json()["type"] == "unresolvable"


def test_empty_candidate_set_is_empty_list():
    # every resolvable type admits a default literal, so stub the generator out
    units, index = _ctx(["class T { void f(int q) {} void m() { f(1); } }"])
    r, ctx = _request(units, index, "f")
    rec = Recommender(B.train(units, index=index).model, B.empty_tables(), PipelineConfig())
    rec.candidates = lambda r, ctx: []
    out = rec.recommend(r, ctx)
    assert out.items == [] and out.total_candidates == 0


def test_beam_baseline_may_suggest_invalid_names():
    src = "class T { void f(int a) {} void m(int tokenImage) { f(tokenImage); f(tokenImage); } void n() { f(); } }"
    units, index = _ctx([src])
    u = units[0]
    ctx = UnitContext(u, index)
    r = [r for r in extract_requests(u, ctx=ctx) if r.callee == "f"][-1]
    trained = B.train(units, B.TrainOptions(min_count=1), index=index)
    out = beam_baseline(r, trained.model, k=3)
    assert out and all(x["tokens"] for x in out)
    assert any("token" in x["tokens"] for x in out)  # out of scope in n()
