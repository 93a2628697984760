import itertools

import pytest
from hypothesis import given, strategies as st

from tcnet.wqo import embed_leq, equality, max_bipartite_matching, product_leq, subset_leq, subword_leq, vec_leq

from oracles import brute_embed, brute_subset, brute_subword


def test_vectors():
    assert vec_leq((0, 0), (1, 1))
    assert not vec_leq((1, 0), (0, 1))
    assert vec_leq((1, 1), (1, 1))
    with pytest.raises(ValueError):
        vec_leq((1,), (1, 2))


def test_product():
    leq = product_leq(equality, vec_leq)
    assert leq(((1,), (0, 0)), ((1,), (1, 1)))
    assert not leq(((1,), (0, 0)), ((2,), (1, 1)))
    assert leq(("a", ()), ("a", ()))


def test_subword_examples():
    assert subword_leq(("m1", "m2"), ("m1", "m3", "m2"))
    assert subword_leq((), ("a", "b"))
    assert not subword_leq(("a", "b"), ("b", "a"))


def test_subset_needs_injective_map():
    leq = subset_leq(lambda a, b: a <= b)
    assert leq(frozenset(), frozenset({1}))
    assert not leq(frozenset({1, 2}), frozenset({3}))
    assert leq(frozenset({1, 2}), frozenset({2, 3}))


def test_matching_size():
    assert max_bipartite_matching([1, 2, 3], [3, 3], lambda a, b: a <= b) == 2
    assert max_bipartite_matching([], [1], lambda a, b: True) == 0


BASE = (0, 1, 2)


def divides(a, b):
    return b % (a + 1) == 0 if a else True


@pytest.mark.parametrize("base_leq", [equality, lambda a, b: a <= b, divides])
def test_embed_matches_search_on_short_words(base_leq):
    leq = embed_leq(base_leq)
    words = [w for n in range(4) for w in itertools.product(BASE, repeat=n)]
    for s in words:
        for t in words:
            assert leq(s, t) == brute_embed(s, t, base_leq), (s, t)


words6 = st.lists(st.sampled_from(BASE), max_size=6).map(tuple)


@given(words6, words6)
def test_embed_property(s, t):
    base = lambda a, b: a <= b
    assert embed_leq(base)(s, t) == brute_embed(s, t, base)
    assert subword_leq(s, t) == brute_subword(s, t)


@given(words6)
def test_embed_reflexive(s):
    assert embed_leq(equality)(s, s)


@given(words6, words6, words6)
def test_embed_transitive(r, s, t):
    leq = embed_leq(lambda a, b: a <= b)
    if leq(r, s) and leq(s, t):
        assert leq(r, t)


pairs = st.frozensets(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=5)


@given(pairs, pairs)
def test_subset_property(a1, a2):
    assert subset_leq(vec_leq)(a1, a2) == brute_subset(a1, a2, vec_leq)
