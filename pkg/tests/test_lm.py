import itertools

import pytest
from hypothesis import given, settings, strategies as st

from argrec.corpus.lexer import tokenize
from argrec.lm import HOLE, UNK, NGramModel, lm_tokens, text_tokens

AB = ["a", "b", "a", "b"]


def _model(streams, **kw):
    kw.setdefault("min_count", 1)
    return NGramModel(**kw).train(streams)


# ---------------------------------------------------------------- training

def test_bigram_counts():
    m = _model([("p", AB)], order=2)
    c = m.global_layer.counts
    assert c[("a",)]["b"] == 2 and c[("b",)]["a"] == 1
    assert m.global_layer.totals[()] == 4


def test_successor_counts_sum_to_totals():
    m = _model([("p", list("abcabbca")), ("q", list("cab"))], order=3)
    for layer in [m.global_layer] + list(m.package_layers.values()):
        for ctx, succ in layer.counts.items():
            assert sum(succ.values()) == layer.totals[ctx]


def test_rare_token_maps_to_unk():
    m = NGramModel(order=2, min_count=2).train([("p", ["a", "a", "z"])])
    assert "z" not in m.vocab and m.map_token("z") == UNK
    assert m.global_layer.counts[("a",)][UNK] == 1


def test_package_layers_are_disjoint():
    m = _model([("p", ["a", "b"]), ("q", ["c", "d"])], order=2)
    assert sorted(m.package_layers) == ["p", "q"]
    assert ("c",) not in m.package_layers["p"].counts
    assert ("a",) not in m.package_layers["q"].counts


def test_empty_corpus_is_an_error():
    with pytest.raises(ValueError):
        NGramModel().train([])


def test_training_is_order_independent():
    streams = [("p", list("abcab")), ("q", list("bbca")), ("p", list("cc"))]
    a = _model(streams, order=3)
    b = _model(list(reversed(streams)), order=3)
    assert a.global_layer.lines() == b.global_layer.lines()
    assert {k: v.lines() for k, v in a.package_layers.items()} == \
        {k: v.lines() for k, v in b.package_layers.items()}


def test_lm_tokens_split_identifiers_and_collapse_literals():
    toks = lm_tokens(tokenize('getUserName("x", 12)'))
    assert toks == ["get", "user", "name", "(", "<STR>", ",", "<NUM>", ")"]
    assert text_tokens("new Point(, )") == ["new", "point", "(", ",", ")"]
    assert HOLE in text_tokens("f(, )", holes=True)


# ---------------------------------------------------------------- probabilities

def test_jm_hand_computation():
    # vocabulary {a, b, UNK, HOLE}: P1(b) = .5*.5 + .5*.25, P2(b|a) = .5*1 + .5*P1(b)
    m = _model([("p", AB)], order=2, lam=0.5)
    assert m.token_prob(["a"], "b") == pytest.approx(0.6875, abs=1e-15)
    assert m.token_prob([], "b") == pytest.approx(0.375, abs=1e-15)


def test_unseen_token_has_positive_probability():
    m = _model([("p", AB)], order=3)
    assert m.token_prob([], "never") > 0
    assert m.token_prob(["x", "y"], "zzz") > 0


def test_lambda_extremes():
    m1 = _model([("p", AB)], order=2, lam=1.0)
    assert m1.token_prob(["a"], "b") == 1.0
    assert m1.token_prob(["a"], "a") == 0.0
    m0 = _model([("p", AB)], order=2, lam=0.0)
    v = len(m0.vocabulary)
    assert all(m0.token_prob(["a"], t) == 1 / v for t in m0.vocabulary)


def test_sequence_prob_chain_rule():
    m = _model([("p", list("abcabca"))], order=3)
    ctx = ["c"]
    assert m.sequence_prob(ctx, ["a"]) == m.token_prob(ctx, "a")
    assert m.sequence_prob(ctx, ["a", "b"]) == pytest.approx(
        m.token_prob(ctx, "a") * m.token_prob(ctx + ["a"], "b"), rel=1e-15)
    with pytest.raises(ValueError):
        m.sequence_prob(ctx, [])


@st.composite
def corpora(draw):
    vocab = draw(st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=5, unique=True))
    streams = draw(st.lists(st.lists(st.sampled_from(vocab), min_size=1, max_size=15),
                            min_size=1, max_size=3))
    ctx = draw(st.lists(st.sampled_from(vocab + ["q"]), max_size=5))
    return streams, ctx


@settings(max_examples=100, deadline=None)
@given(corpora(), st.integers(1, 4), st.sampled_from([0.0, 0.3, 0.5, 1.0]), st.booleans())
def test_normalization(data, order, lam, cached):
    streams, ctx = data
    m = _model([(f"p{i % 2}", s) for i, s in enumerate(streams)], order=order, lam=lam)
    if cached:
        m.update_cache("F", streams[0] + ["fresh"])
    total = sum(m.token_prob(ctx, t, "p0", "F") for t in m.vocabulary)
    assert abs(total - 1) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(corpora(), st.lists(st.sampled_from("abc"), min_size=1, max_size=4))
def test_extending_a_sequence_never_increases_probability(data, seq):
    streams, ctx = data
    m = _model([("p", s) for s in streams], order=3)
    for i in range(1, len(seq)):
        assert m.sequence_prob(ctx, seq[:i + 1]) <= m.sequence_prob(ctx, seq[:i])


# ---------------------------------------------------------------- file cache

def test_cache_raises_probability_in_its_file_only():
    m = _model([("p", list("abcabc"))], order=2)
    before_f = m.token_prob(["x"], "y", "p", "F")
    before_g = m.token_prob(["x"], "y", "p", "G")
    m.update_cache("F", ["x", "y"])
    assert m.token_prob(["x"], "y", "p", "F") > before_f
    m.clear_cache("F")
    assert m.token_prob(["x"], "y", "p", "F") == before_f
    assert m.token_prob(["x"], "y", "p", "G") == before_g


def test_cache_isolation_for_in_vocabulary_tokens():
    m = _model([("p", list("abcabc"))], order=2)
    before = m.token_prob(["a"], "c", "p", "G")
    m.update_cache("F", ["a", "c", "a", "c"])
    assert m.token_prob(["a"], "c", "p", "F") > m.token_prob(["a"], "c", "p", "G")
    assert m.token_prob(["a"], "c", "p", "G") == before
    m.clear_cache()
    assert not m.file_layers and not m.cache_vocab


def test_clone_is_independent():
    m = _model([("p", AB)], order=2)
    c = m.clone()
    c.add_stream("p", ["b", "b", "b"])
    assert m.global_layer.lines() != c.global_layer.lines()


def test_extend_vocab_admits_frequent_tokens():
    m = _model([("p", AB)], order=2)
    new = m.extend_vocab([["z", "z", "y"]], min_count=2)
    assert new == {"z"} and "z" in m.vocab and "y" not in m.vocab


# ---------------------------------------------------------------- beam search

def test_beam_forced_chain():
    m = _model([("p", ["x", "y", ","] * 5)], order=3, lam=1.0)
    ((p, seq),) = m.beam_search(["y", ","], 1, 3, 4)
    assert seq == ("x", "y")
    assert p == pytest.approx(1.0)


def test_width_one_is_greedy():
    m = _model([("p", list("ab,ba,aab,") + [")"])], order=2)
    ctx, max_len = [","], 3
    vocab = [t for t in m.vocabulary if not t.startswith("<")]
    seq, p = [], 1.0
    for step in range(max_len + 1):
        options = []
        for t in vocab:
            q = p * m.token_prob(ctx + seq, t)
            if t in (",", ")"):
                if seq:
                    options.append((q, seq, True))
            elif step < max_len:
                options.append((q, seq + [t], False))
        q, nxt, closed = min(options, key=lambda o: (-o[0], tuple(o[1]), o[2]))
        p, seq = q, nxt
        if closed:
            break
    ((bp, bseq),) = m.beam_search(ctx, 1, 1, max_len)
    assert list(bseq) == seq and bp == pytest.approx(p)


def test_beam_rejects_bad_width():
    m = _model([("p", AB)], order=2)
    with pytest.raises(ValueError):
        m.beam_search([], 3, 2, 2)


def test_beam_results_sorted():
    m = _model([("p", list("ab,ba,aab,ab)"))], order=2)
    res = m.beam_search(["a"], 5, 50, 3)
    keys = [(-p, s) for p, s in res]
    assert keys == sorted(keys)
    assert len({s for _, s in res}) == len(res)


# ---------------------------------------------------------------- persistence

def test_save_load_round_trip(tmp_path):
    m = _model([("p", list("abcab")), ("q", list("ccab"))], order=3)
    man = m.save(tmp_path)
    m2 = NGramModel.load(tmp_path, man)
    for ctx, t in itertools.product([[], ["a"], ["c", "a"]], ["a", "b", "c", "z"]):
        assert m2.token_prob(ctx, t, "q") == m.token_prob(ctx, t, "q")
