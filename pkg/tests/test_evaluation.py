from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from argrec import bundle as B
from argrec.candgen import make_candidate
from argrec.corpus.ast import ExprType
from argrec.corpus.loader import SplitError
from argrec.corpus.exprs import placeholder_shape
from argrec.corpus.parser import parse_expression, parse_unit
from argrec.evaluation import (MetricError, Tally, evaluate, matches_gold, mrr, precision_at_k,
                               recall_at_k)
from argrec.typesys.resolve import AccessibleVar


def _cand(text, variable=None):
    return make_candidate(parse_expression(text), "int", "test", variable=variable)


def _gold(text):
    from argrec.corpus.exprs import classify
    node = parse_expression(text)
    return node, classify(node)


# ---------------------------------------------------------------- matching

def test_this_prefix_is_canonicalized():
    field = AccessibleVar("count", "int", "field")
    assert matches_gold(_cand("this.count", field), *_gold("count"))
    assert matches_gold(_cand("count", field), *_gold("this.count"))


def test_this_prefix_not_equal_to_a_local():
    local = AccessibleVar("count", "int", "local")
    assert not matches_gold(_cand("count", local), *_gold("this.count"))
    shadowed = AccessibleVar("count", "int", "field", shadowed=True)
    assert not matches_gold(_cand("this.count", shadowed), *_gold("count"))


def test_literals_match_by_type():
    assert matches_gold(_cand('"<EMPTY_STRING>"'), *_gold('"hello"'))
    assert matches_gold(_cand("0"), *_gold("42"))
    assert not matches_gold(_cand("0"), *_gold('"42"'))


def test_different_names_do_not_match():
    assert not matches_gold(_cand("a"), *_gold("b"))


def _shape(text):
    return make_candidate(placeholder_shape(parse_expression(text)), "int", "test")


def test_placeholder_shape_matches():
    assert matches_gold(_shape("new Point(a, b)"), *_gold("new Point(x, y + 1)"))
    assert not matches_gold(_shape("new Point(a)"), *_gold("new Point(x, y)"))
    assert matches_gold(_shape("arr[0]"), *_gold("arr[i]"))
    assert matches_gold(_shape("p.get(z)"), *_gold("p.get(k)"))
    assert not matches_gold(_shape("q.get(z)"), *_gold("p.get(k)"))
    assert not matches_gold(_shape("p.get()"), *_gold("p.get(k)"))


def test_whitespace_is_normalized():
    assert matches_gold(_cand("a.b"), *_gold("a . b"))


# ---------------------------------------------------------------- metrics

def test_precision_recall_example():
    assert precision_at_k(4, 8, 10) == Fraction(1, 2)
    assert recall_at_k(4, 8, 10) == Fraction(2, 5)
    assert precision_at_k(5, 5, 5) == recall_at_k(5, 5, 5) == 1
    assert precision_at_k(0, 5, 7) == recall_at_k(0, 5, 7) == 0


def test_metric_input_integrity():
    with pytest.raises(MetricError):
        precision_at_k(5, 4, 10)
    with pytest.raises(MetricError):
        recall_at_k(1, 11, 10)


def test_mrr_examples():
    assert mrr([2]) == Fraction(1, 2)
    assert mrr([1, 2, 4]) == Fraction(7, 12)
    assert mrr([None, None]) == 0
    assert mrr([]) == 0


def test_empty_denominators_are_flagged():
    doc = Tally().to_json()
    assert doc["precision"]["1"] == 0.0 and set(doc["undefined"]) == {"A", "S"}


@given(st.lists(st.tuples(st.booleans(), st.one_of(st.none(), st.integers(1, 30))), min_size=1))
def test_report_identities(rows):
    t = Tally()
    for sup, rank in rows:
        t.add(sup, rank if sup else None, identified=sup)
    doc = t.to_json()
    assert doc["S"] <= doc["A"]
    prev = 0
    for k, rk in doc["R"].items():
        assert prev <= rk <= doc["S"]
        prev = rk
        p, rc = Fraction(doc["exact"][f"precision@{k}"]), Fraction(doc["exact"][f"recall@{k}"])
        if doc["S"]:
            assert p * doc["S"] == rk
        assert rc * doc["A"] == rk
        assert p >= rc
    m = Fraction(doc["exact"]["mrr"])
    top1 = Fraction(doc["R"]["1"], doc["A"])
    top_inf = Fraction(sum(1 for r in t.ranks if r is not None), doc["A"])
    assert top1 <= m <= top_inf


# ---------------------------------------------------------------- scenarios

def test_overlapping_split_rejected(corpus_split):
    train, test = corpus_split
    trained = B.train(train)
    with pytest.raises(SplitError):
        evaluate(trained, train[:1])


def test_unknown_scenario(split_trained, corpus_split):
    with pytest.raises(ValueError):
        evaluate(split_trained, corpus_split[1], "weekly")


def test_dynamic_second_occurrence_at_least_first(scenario_split):
    train, test = scenario_split
    trained = B.train(train)
    rep = evaluate(trained, test, "dynamic", keep_requests=True)
    by_file = {}
    for rec in rep.requests:
        by_file.setdefault(rec["key"].split(":")[0], []).append(rec)
    for recs in by_file.values():
        hits = [r["rank"] == 1 for r in recs if r["supported"]]
        assert hits[1] >= hits[0]


def test_static_equals_dynamic_without_repetition(tmp_path):
    lib = parse_unit("package q; public class Lib { public void put(int v) {} }", "q/Lib.java", "q")
    t = parse_unit("package q; class Use { void m(Lib l, int zz) { l.put(zz); } }", "q/Use.java", "q")
    trained = B.train([lib])
    static = evaluate(trained, [t], "static", keep_requests=True)
    dynamic = evaluate(trained, [t], "dynamic", keep_requests=True)
    assert static.to_json()["metrics"] == dynamic.to_json()["metrics"]
    assert static.requests == dynamic.requests


def test_report_breakdowns(split_trained, corpus_split):
    doc = evaluate(split_trained, corpus_split[1], "static").to_json()
    assert doc["metrics"]["A"] == sum(v["A"] for v in doc["byExprType"].values())
    assert set(doc["byCalleeOrigin"]) <= {"intra-project", "inter-project", "unresolved"}
    assert "meanLatencyMs" not in doc
    assert ExprType.SimpleName.value in doc["byExprType"]
