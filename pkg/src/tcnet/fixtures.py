"""Ready-made machines, automata, words and joint configurations.

These are the worked examples the test-suite and the CLI documentation refer
to, plus a suite of inclusion problems with known answers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .automata import (
    NOOP,
    Atom,
    Automaton,
    ConcreteState,
    Edge,
    StoreSpec,
    TimedWord,
    VisiblyAlphabet,
)
from .channel.gadgets import gen_exclusion_net
from .channel.machine import ChannelConfig, ChannelMachine, ChannelStep
from .regionwords import Item, JointConfiguration, RegionWord

__all__ = [
    "example_machine",
    "example_machine_reachable",
    "faulty_computation",
    "example_encoding_word",
    "wildcard_steps",
    "exclusion_net",
    "counting_net",
    "joint_c2",
    "joint_c3",
    "joint_w1",
    "joint_cmax",
    "InclusionCase",
    "inclusion_suite",
    "flat_alphabet",
    "automaton",
]


def _word(pairs) -> TimedWord:
    return TimedWord(tuple((a, Fraction(t)) for a, t in pairs))


def example_machine() -> ChannelMachine:
    """Four states, three messages; the final state is reachable only with insertion errors."""
    return ChannelMachine(
        states={"sI", "s", "s'", "sF"},
        initial="sI",
        messages={"m1", "m2", "m3"},
        transitions={
            ("sI", "empty?", "s"),
            ("s", "!m1", "s"),
            ("s", "!m2", "s'"),
            ("s'", "?m1", "s'"),
            ("s'", "?m3", "sF"),
        },
        final="sF",
    )


def example_machine_reachable() -> ChannelMachine:
    """The example machine plus ``(s', ?m2, sF)``, which makes the final state reachable without errors."""
    c = example_machine()
    return ChannelMachine(c.states, c.initial, c.messages, c.transitions | {("s'", "?m2", "sF")}, c.final)


def faulty_computation() -> tuple:
    """``(sI,ε) → (s,ε) → (s,m1) → (s',m1 m2) ⇝ (s',m3 m2) → (sF,m2)``; the fourth step inserts m3."""
    cfgs = [("sI", ()), ("s", ()), ("s", ("m1",)), ("s'", ("m1", "m2")), ("s'", ("m3", "m2")), ("sF", ("m2",))]
    labels = ["empty?", "!m1", "!m2", "?m1", "?m3"]
    return tuple(
        ChannelStep(ChannelConfig(*cfgs[i]), labels[i], ChannelConfig(*cfgs[i + 1])) for i in range(len(labels))
    )


def example_encoding_word() -> TimedWord:
    """Encoding of :func:`faulty_computation` with channel length 2; ``-`` and ``*`` close the last block."""
    return _word([
        ("sI", "1.0"), ("+", "1.2"), ("+", "1.8"), ("empty?", "2.0"),
        ("s", "3.0"), ("#", "3.2"), ("#", "3.8"), ("!m1", "4.0"),
        ("s", "5.0"), ("m1", "5.2"), ("#", "5.8"), ("!m2", "6.0"),
        ("s'", "7.0"), ("m1", "7.2"), ("m2", "7.8"), ("?m1", "8.0"),
        ("s'", "9.0"), ("m3", "9.1"), ("m2", "9.8"), ("#", "9.9"), ("?m3", "10.0"),
        ("sF", "11.0"), ("-", "11.8"), ("-", "11.9"), ("-", "11.95"), ("*", "12.0"),
    ])


def wildcard_steps() -> tuple:
    """``(s, m1 m1) !m2 (s', m1 m1 m2) ?m1 (s', m1 m2)`` on the example machine."""
    a = ChannelConfig("s", ("m1", "m1"))
    b = ChannelConfig("s'", ("m1", "m1", "m2"))
    c = ChannelConfig("s'", ("m1", "m2"))
    return (ChannelStep(a, "!m2", b), ChannelStep(b, "?m1", c))


def exclusion_net() -> Automaton:
    return gen_exclusion_net(example_machine())


def flat_alphabet(*letters) -> VisiblyAlphabet:
    return VisiblyAlphabet(internal=frozenset(letters), call=frozenset(), ret=frozenset())


def _guard(text: str) -> tuple:
    atoms = []
    for part in filter(None, (p.strip() for p in text.split("&"))):
        for rel in ("<=", ">=", "<", ">", "="):
            if rel in part:
                clock, bound = part.split(rel)
                atoms.append(Atom(clock.strip(), rel, int(bound)))
                break
    return tuple(atoms)


def automaton(letters, locations, initial, accepting, clocks, edges, dimension=None) -> Automaton:
    """Compact builder: edges are ``(source, letter, guard text, resets, target[, counter update])``.

    ``dimension=None`` gives a plain timed automaton, otherwise a counter net.
    """
    store = StoreSpec.none() if dimension is None else StoreSpec.counters(dimension)
    built = []
    for e in edges:
        src, letter, guard, resets, dst = e[:5]
        op = NOOP if dimension is None else tuple(e[5]) if len(e) > 5 else (0,) * dimension
        built.append(Edge(src, letter, _guard(guard), op, frozenset(resets), dst))
    return Automaton(flat_alphabet(*letters), store, locations, initial, accepting, clocks, tuple(built))


def counting_net() -> Automaton:
    """Clockless one-counter net accepting ``a^n b^m`` with ``n ≥ m`` and ``n ≥ 1``, at any times."""
    return automaton("ab", {"q0", "q1"}, {"q0"}, {"q1"}, (), [
        ("q0", "a", "", (), "q0", (1,)),
        ("q0", "a", "", (), "q1", (1,)),
        ("q1", "b", "", (), "q1", (-1,)),
    ], dimension=1)


joint_cmax = 2


def _a(loc, clock, value):
    return ConcreteState(loc, ((clock, Fraction(value)),), ())


def _b(loc, value, counters):
    return ConcreteState(loc, (("x", Fraction(value)),), tuple(counters))


def joint_c2() -> JointConfiguration:
    return JointConfiguration(
        _a("l", "y", "1.3"),
        {_b("l2", "0.7", (1, 1)), _b("l1", "1.0", (1, 1)), _b("l3", "0.5", (0, 1)), _b("l1", "2.2", (0, 0))},
        2,
    )


def joint_c3() -> JointConfiguration:
    return JointConfiguration(
        _a("l", "y", "1.1"),
        {_b("l2", "0.9", (1, 1)), _b("l1", "1.0", (1, 1)), _b("l3", "0.2", (0, 1)), _b("l1", "9.2", (0, 0))},
        2,
    )


def joint_w1() -> RegionWord:
    return RegionWord(
        zero=frozenset({Item("B", "l1", "x", 1, (1, 0))}),
        frac=(frozenset({Item("A", "l", "y", 1, (0, 0))}), frozenset({Item("B", "l2", "x", 0, (1, 1))})),
        top=frozenset(),
        cmax=joint_cmax,
    )


@dataclass(frozen=True)
class InclusionCase:
    name: str
    a: Automaton
    b: Automaton
    included: bool


def _as_net(aut: Automaton, dimension: int = 0) -> Automaton:
    """The same automaton as a counter net of the given dimension with zero updates."""
    zero = (0,) * dimension
    edges = tuple(Edge(e.source, e.letter, e.guard, zero, e.resets, e.target) for e in aut.edges)
    return Automaton(aut.alphabet, StoreSpec.counters(dimension), aut.locations, aut.initial,
                     aut.accepting, aut.clocks, edges)


def inclusion_suite() -> list:
    """Inclusion problems with known answers over the letters ``a`` and ``b``."""
    ab = "ab"
    any_a = automaton(ab, {"p", "q"}, {"p"}, {"q"}, (), [("p", "a", "", (), "q")])
    a_at_1 = automaton(ab, {"p", "q"}, {"p"}, {"q"}, ("x",), [("p", "a", "x=1", (), "q")], dimension=0)
    a_after_1 = automaton(ab, {"p", "q"}, {"p"}, {"q"}, ("x",), [("p", "a", "x>1", (), "q")])
    a_from_1 = automaton(ab, {"p", "q"}, {"p"}, {"q"}, ("x",), [("p", "a", "x>=1", (), "q")])

    # a, then b exactly one unit later, all within two units
    two_clocks = automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("y", "z"), [
        ("p", "a", "z<=1", ("y",), "q"),
        ("q", "b", "y=1 & z<=2", (), "r"),
    ])
    b_one_later_ta = automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("x",), [
        ("p", "a", "", ("x",), "q"),
        ("q", "b", "x=1", (), "r"),
    ])
    b_one_later = _as_net(b_one_later_ta)
    b_soon = automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("x",), [
        ("p", "a", "", ("x",), "q"),
        ("q", "b", "x<1", (), "r"),
    ], dimension=0)

    def word_acceptor(letters):
        locs = [f"w{i}" for i in range(len(letters) + 1)]
        edges = [(locs[i], l, "", (), locs[i + 1]) for i, l in enumerate(letters)]
        return automaton(ab, set(locs), {locs[0]}, {locs[-1]}, (), edges)

    aab = word_acceptor("aabb")
    abb = word_acceptor("abb")
    ab_word = word_acceptor("ab")

    # a^+ b^+ with the first a before time 1
    quick_start = automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("y",), [
        ("p", "a", "y<1", (), "q"),
        ("q", "a", "", (), "q"),
        ("q", "b", "", (), "r"),
        ("r", "b", "", (), "r"),
    ])
    # counting net whose first a must come before time 1
    counting_quick = automaton(ab, {"q0", "q1"}, {"q0"}, {"q1"}, ("x",), [
        ("q0", "a", "x<1", ("x",), "q1", (1,)),
        ("q1", "a", "", (), "q1", (1,)),
        ("q1", "b", "", (), "q1", (-1,)),
    ], dimension=1)
    counting_quick_slow_start = automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("y",), [
        ("p", "a", "y<=1", (), "q"),
        ("q", "b", "", (), "r"),
    ])

    plus_counter = automaton(ab, {"p", "q"}, {"p"}, {"q"}, (), [("p", "a", "", (), "q", (1,))], dimension=1)
    universal_net = automaton(ab, {"u"}, {"u"}, {"u"}, (), [("u", "a", "", (), "u"), ("u", "b", "", (), "u")],
                              dimension=0)

    return [
        InclusionCase("self", b_one_later_ta, b_one_later, True),
        InclusionCase("any-a-vs-a-at-1", any_a, a_at_1, False),
        InclusionCase("a-vs-a-with-increment", any_a, plus_counter, True),
        InclusionCase("after-1-in-from-1", a_after_1, _as_net(a_from_1), True),
        InclusionCase("from-1-in-after-1", a_from_1, _as_net(a_after_1), False),
        InclusionCase("one-later-in-unguarded-delay", two_clocks, b_one_later, True),
        InclusionCase("one-later-vs-soon", two_clocks, b_soon, False),
        InclusionCase("aabb-in-counting", aab, counting_net(), True),
        InclusionCase("abb-vs-counting", abb, counting_net(), False),
        InclusionCase("quick-start-vs-counting-quick", quick_start, counting_quick, False),
        InclusionCase("ab-quick-in-counting-quick",
                      automaton(ab, {"p", "q", "r"}, {"p"}, {"r"}, ("y",), [
                          ("p", "a", "y<1", (), "q"), ("q", "b", "", (), "r")]),
                      counting_quick, True),
        InclusionCase("slow-start-vs-counting-quick", counting_quick_slow_start, counting_quick, False),
        InclusionCase("anything-in-universal", aab, universal_net, True),
        InclusionCase("ab-in-counting", ab_word, counting_net(), True),
    ]
