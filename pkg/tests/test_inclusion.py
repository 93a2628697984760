from fractions import Fraction

import pytest

from tcnet.automata import EMPTY, Automaton, Edge, StoreSpec, TimedWord, VisiblyAlphabet, membership
from tcnet.fixtures import automaton, counting_net, inclusion_suite
from tcnet.inclusion import (
    BudgetExhausted,
    InclusionError,
    check_inclusion,
    check_universality,
    concretize,
)

SUITE = inclusion_suite()


@pytest.mark.parametrize("case", SUITE, ids=[c.name for c in SUITE])
def test_suite_verdicts(case):
    v = check_inclusion(case.a, case.b)
    assert v.included == case.included
    if not v.included:
        assert membership(case.a, v.witness).accepted
        assert not membership(case.b, v.witness).accepted
        assert concretize(v.initial, v.trace, case.a, case.b) == v.witness


def test_deterministic_verdicts():
    for case in SUITE:
        first, second = check_inclusion(case.a, case.b), check_inclusion(case.a, case.b)
        assert first == second


def test_budget():
    case = SUITE[0]
    with pytest.raises(BudgetExhausted):
        check_inclusion(case.a, case.b, budget=1)


def test_exact_boundary_witness():
    case = next(c for c in SUITE if c.name == "from-1-in-after-1")
    assert check_inclusion(case.a, case.b).witness == TimedWord.of(("a", 1))


def test_open_interval_witness_is_midpoint():
    a = automaton("a", {"p", "q"}, {"p"}, {"q"}, ("y",), [("p", "a", "y>0 & y<1", (), "q")])
    b = automaton("a", {"p"}, {"p"}, set(), ("x",), [], dimension=0)
    assert check_inclusion(a, b).witness == TimedWord.of(("a", Fraction(1, 2)))


def test_universality():
    universal = automaton("ab", {"u"}, {"u"}, {"u"}, (), [("u", "a", "", (), "u"), ("u", "b", "", (), "u")],
                          dimension=0)
    assert check_universality(universal).included
    v = check_universality(counting_net())
    assert not v.included and v.witness.letters[0] == "b"
    assert not membership(counting_net(), v.witness).accepted
    blocking = automaton("a", {"u"}, {"u"}, {"u"}, (), [("u", "a", "", (), "u", (-1,))], dimension=1)
    v = check_universality(blocking)
    assert not v.included and len(v.witness) == 1
    assert not membership(blocking, v.witness).accepted


def test_preconditions():
    a = automaton("a", {"p"}, {"p"}, {"p"}, (), [("p", "a", "", (), "p")])
    other_letters = automaton("ab", {"p"}, {"p"}, {"p"}, (), [("p", "a", "", (), "p")], dimension=0)
    with pytest.raises(InclusionError, match="alphabet"):
        check_inclusion(a, other_letters)
    two_clocks = automaton("a", {"p"}, {"p"}, {"p"}, ("x", "y"), [("p", "a", "x<1 & y<1", (), "p")], dimension=0)
    with pytest.raises(InclusionError, match="one clock"):
        check_inclusion(a, two_clocks)
    ret = VisiblyAlphabet(internal=frozenset(), call=frozenset(), ret=frozenset({"a"}))
    tested = Automaton(ret, StoreSpec.one_counter(), {"p"}, {"p"}, {"p"}, (),
                       (Edge("p", "a", (), EMPTY, frozenset(), "p"),))
    plain = Automaton(ret, StoreSpec.none(), {"p"}, {"p"}, {"p"}, (), ())
    with pytest.raises(InclusionError):
        check_inclusion(plain, tested)
    with pytest.raises(InclusionError, match="timed automaton"):
        check_inclusion(counting_net(), counting_net())


def test_cmax_too_small():
    case = next(c for c in SUITE if c.name == "one-later-vs-soon")
    with pytest.raises(InclusionError, match="cmax"):
        check_inclusion(case.a, case.b, cmax=1)
    assert not check_inclusion(case.a, case.b, cmax=5).included
