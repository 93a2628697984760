from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tcnet.automata import TimedWord
from tcnet.fixtures import example_encoding_word
from tcnet.mtl import (
    TRUE,
    And,
    Atom,
    Interval,
    MtlError,
    MtlParseError,
    Not,
    Until,
    eval_at,
    models,
    parse_mtl,
    to_text,
)

from oracles import mtl_enumerate, random_formula, random_timed_word


def w(*pairs):
    return TimedWord(tuple((a, Fraction(t)) for a, t in pairs))


def test_atoms_and_until():
    assert eval_at(w(("a", 0)), 1, Atom("a"))
    a_until_b = Until(Atom("a"), Interval(0, 1, True, True), Atom("b"))
    assert eval_at(w(("a", 0), ("b", "1/2")), 1, a_until_b)
    assert not eval_at(w(("a", 0), ("b", 3)), 1, a_until_b)


def test_until_is_strict():
    # the current position never witnesses the right side
    assert not models(w(("b", 0)), Until(TRUE, Interval(), Atom("b")))


def test_models():
    assert models(w(("a", 0)), TRUE)
    assert models(example_encoding_word(), Atom("sI"))


def test_position_range():
    with pytest.raises(MtlError):
        eval_at(w(("a", 0)), 2, TRUE)


def test_parser():
    assert parse_mtl("a U[0,1] b") == Until(Atom("a"), Interval(0, 1, True, True), Atom("b"))
    f = parse_mtl("!(a & b)")
    assert f == Not(And(Atom("a"), Atom("b")))
    assert parse_mtl(to_text(f)) == f
    assert parse_mtl("F(0,inf) a") == Until(TRUE, Interval(0, None, False, False), Atom("a"))


def test_parse_errors_carry_position():
    with pytest.raises(MtlParseError) as err:
        parse_mtl("a & ")
    assert err.value.position == 4
    with pytest.raises(MtlParseError):
        parse_mtl("a U[2,1] b")


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_printing_round_trips(rng):
    f = random_formula(rng, "abc", 4)
    assert parse_mtl(to_text(f)) == f


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_negation(rng):
    word = random_timed_word(rng, "abc")
    f = random_formula(rng, "abc", 3)
    assert models(word, Not(f)) == (not models(word, f))


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_agrees_with_enumeration(rng):
    word = random_timed_word(rng, "abc")
    f = random_formula(rng, "abc", 4)
    i = rng.randint(1, len(word))
    assert eval_at(word, i, f) == mtl_enumerate(word, i, f)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.fractions(min_value=0, max_value=4, max_denominator=4))
def test_time_shift_invariance(rng, offset):
    word = random_timed_word(rng, "ab")
    f = random_formula(rng, "ab", 3)
    assert models(word, f) == models(word.shifted(offset), f)
