import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tcnet.automata import TimedWord
from tcnet.channel import gen_condition10_vonca, generate_corpus
from tcnet.fixtures import (
    counting_net,
    example_encoding_word,
    example_machine,
    exclusion_net,
    faulty_computation,
    inclusion_suite,
)
from tcnet.formats import (
    FormatError,
    dump_automaton,
    dump_computation,
    dump_corpus,
    dump_machine,
    dump_verdict,
    dump_word,
    load_automaton,
    load_computation,
    load_corpus,
    load_machine,
    load_verdict,
    load_word,
    parse_time,
)
from tcnet.inclusion import check_inclusion

from oracles import random_timed_word

SUITE = inclusion_suite()


@pytest.mark.parametrize("aut", [counting_net(), exclusion_net(), gen_condition10_vonca(example_machine())]
                         + [c.a for c in SUITE[:6]] + [c.b for c in SUITE[:6]])
def test_automaton_round_trip(aut):
    assert load_automaton(dump_automaton(aut)) == aut


def test_times_are_exact():
    assert parse_time("1.2") == Fraction(6, 5)
    assert parse_time("3/4") == Fraction(3, 4)
    assert load_word('[[a, "0.1"], [b, 1/3]]') == TimedWord((("a", Fraction(1, 10)), ("b", Fraction(1, 3))))
    with pytest.raises(ValueError):
        parse_time("-1")


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_word_round_trip(rng):
    w = random_timed_word(rng, ["a", "s'", "!m1", "empty?"], denominator=7)
    assert load_word(dump_word(w)) == w


def test_example_word_round_trip():
    w = example_encoding_word()
    assert load_word(dump_word(w)) == w


def test_machine_and_computation_round_trip():
    c = example_machine()
    assert load_machine(dump_machine(c)) == c
    steps = faulty_computation()
    assert tuple(load_computation(dump_computation(steps))) == steps


def test_verdict_round_trip():
    for case in SUITE:
        v = check_inclusion(case.a, case.b)
        assert load_verdict(dump_verdict(v)) == v


def test_corpus_round_trip():
    entries = generate_corpus(example_machine(), size=30, seed=4)
    seed, back = load_corpus(dump_corpus(entries, 4))
    assert seed == 4 and back == entries


BAD_GUARD = """kind: ta
alphabet: {int: [a]}
clocks: [x]
locations: [p]
initial: [p]
accepting: [p]
edges:
  - {from: p, letter: a, guard: [[x, "~", 1]], to: p}
"""


def test_errors_carry_positions():
    with pytest.raises(FormatError) as err:
        load_automaton(BAD_GUARD)
    assert err.value.line == 8
    assert "~" in str(err.value)
    with pytest.raises(FormatError) as err:
        load_automaton(BAD_GUARD.replace("to: p", "to: nowhere"))
    assert err.value.line == 8
    with pytest.raises(FormatError) as err:
        load_automaton(BAD_GUARD.replace("kind: ta", "kind: vta"))
    assert err.value.line == 1
    with pytest.raises(FormatError):
        load_word("[[a, 2], [b, 1]]")
    with pytest.raises(FormatError):
        load_automaton("kind: [")


def test_visibly_kinds_are_checked():
    text = dump_automaton(counting_net()).replace("kind: tcn", "kind: vtcn")
    with pytest.raises(FormatError, match="not visibly"):
        load_automaton(text)
    assert load_automaton(dump_automaton(exclusion_net())).store.kind == "stack"


def test_corpus_errors():
    with pytest.raises(FormatError) as err:
        load_corpus("# seed=1\nrandom\tnot json\n")
    assert err.value.line == 2
    assert load_corpus("")[0] is None
    rng = random.Random(0)
    w = random_timed_word(rng, "ab")
    assert load_corpus(dump_corpus([("random", w)], 0))[1] == [("random", w)]
