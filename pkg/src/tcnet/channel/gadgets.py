"""Automata built from a channel machine.

* :func:`gen_exclusion_net` counts the first configuration up and the last one
  down, so it rejects encodings whose last configuration grew.
* :func:`gen_complement_ta` is a one-clock timed automaton accepting exactly
  the timed words outside the encoding language.  It is a union of small
  gadgets, each looking for one kind of violation.
* :func:`gen_condition10_vonca` accepts encodings whose last configuration has
  more wildcard symbols than the first one has ``+`` symbols.
* :func:`gen_universality_automaton` unions the two previous automata.
"""
from __future__ import annotations

from ..automata import (
    EMPTY,
    NOOP,
    Atom,
    Automaton,
    Edge,
    StoreSpec,
    pop,
    push,
    reset_dead_clocks,
    union,
    visibly_lift,
)
from .encoding import HASH, MINUS, PLUS, STAR, encoding_alphabet
from .machine import EMPTY_TEST, ChannelMachine

__all__ = [
    "gen_exclusion_net",
    "gen_complement_ta",
    "gen_condition10_vonca",
    "gen_universality_automaton",
    "gadget_names",
]

CLOCK = "x"


def _lt(k):
    return (Atom(CLOCK, "<", k),)


def _eq(k):
    return (Atom(CLOCK, "=", k),)


def _gt(k):
    return (Atom(CLOCK, ">", k),)


def _le(k):
    return (Atom(CLOCK, "<=", k),)


class _Union:
    """Collects gadgets as disjoint pieces of one automaton."""

    def __init__(self, alphabet):
        self.alphabet = alphabet
        self.sigma = sorted(alphabet.letters)
        self.locations, self.initial, self.accepting = set(), set(), set()
        self.edges = []
        self.names = []

    def gadget(self, name: str, size: int):
        """Register locations ``name.0`` .. ``name.size-1`` plus ``name.acc``; returns their names."""
        self.names.append(name)
        locs = [f"{name}.{i}" for i in range(size)]
        acc = f"{name}.acc"
        self.locations.update(locs)
        self.locations.add(acc)
        self.initial.add(locs[0])
        self.accepting.add(acc)
        self.edges.append((locs[0], self.sigma, (), False, locs[0]))
        self.edges.append((acc, self.sigma, (), False, acc))
        return locs, acc

    def edge(self, src, letters, dst, guard=(), reset=False):
        self.edges.append((src, sorted(letters), guard, reset, dst))

    def build(self) -> Automaton:
        edges = [
            Edge(src, a, guard, NOOP, {CLOCK} if reset else (), dst)
            for src, letters, guard, reset, dst in self.edges
            for a in letters
        ]
        aut = Automaton(self.alphabet, StoreSpec.none(), self.locations, self.initial,
                        self.accepting, (CLOCK,), tuple(edges))
        return reset_dead_clocks(aut)


def _classes(c: ChannelMachine) -> dict:
    states = set(c.states)
    labels = set(c.labels)
    return {
        "S": states,
        "Snf": states - {c.final},
        "M": set(c.messages),
        "L": labels,
        "sends": {l for l in labels if l.startswith("!")},
        "receives": {l for l in labels if l.startswith("?")},
    }


def _shape_dfa(c: ChannelMachine):
    """Subset construction for the untimed shape of encodings, over letter classes."""
    def cls(a):
        if a == c.initial:
            return "I"
        if a == c.final:
            return "F"
        if a in c.states:
            return "S"
        if a in c.messages:
            return "M"
        if a == EMPTY_TEST:
            return "E"
        if a in c.labels:
            return "L"
        return a

    nfa = {
        (0, "I"): {1},
        (1, PLUS): {1},
        (1, "E"): {2},
        (2, "I"): {3},
        (2, "S"): {3},
        (2, "F"): {3, 5},
        (3, "M"): {3},
        (3, HASH): {4},
        (3, "L"): {2},
        (3, "E"): {2},
        (4, HASH): {4},
        (4, "L"): {2},
        (4, "E"): {2},
        (5, MINUS): {5},
        (5, STAR): {6},
    }
    letters = sorted(encoding_alphabet(c).letters)
    start = frozenset({0})
    states, todo, delta = {start}, [start], {}
    while todo:
        d = todo.pop()
        for a in letters:
            nxt = frozenset(q for p in d for q in nfa.get((p, cls(a)), ()))
            delta[(d, a)] = nxt
            if nxt not in states:
                states.add(nxt)
                todo.append(nxt)
    return start, states, delta


def gen_complement_ta(c: ChannelMachine) -> Automaton:
    """One-clock timed automaton accepting every timed word outside the encoding language."""
    alphabet = encoding_alphabet(c)
    u = _Union(alphabet)
    sigma = set(u.sigma)
    k = _classes(c)
    S, Snf, M, L = k["S"], k["Snf"], k["M"], k["L"]
    content = M | {HASH}
    final = c.final

    # timestamps must strictly increase
    (n0, n1), acc = u.gadget("mono", 2)
    u.edge(n0, sigma, n1, reset=True)
    u.edge(n1, sigma, acc, _eq(0))

    # untimed shape: complement of a determinised acceptor
    start, dstates, delta = _shape_dfa(c)
    order = sorted(dstates, key=lambda d: (len(d), sorted(d)))
    names = {d: f"shape.{i}" for i, d in enumerate(order)}
    u.names.append("shape")
    u.locations.update(names.values())
    u.initial.add(names[start])
    u.accepting.update(names[d] for d in dstates if 6 not in d)
    for (d, a), e in delta.items():
        u.edge(names[d], {a}, names[e])

    # label and successor state must form a transition
    for s in sorted(Snf):
        for label in sorted(L):
            bad = S - set(c.targets(s, label))
            if not bad:
                continue
            (g0, g1, g2), acc = u.gadget(f"delta[{s},{label}]", 3)
            u.edge(g0, {s}, g1, reset=True)
            u.edge(g1, sigma, g1)
            u.edge(g1, {label}, g2, _eq(1))
            u.edge(g2, sigma, g2)
            u.edge(g2, bad, acc, _eq(2))

    # forward timing: first M2 after an M1 letter sits exactly k units later
    for name, m1, m2, bound in (
        ("label-at-1", Snf, L, 1),
        ("state-at-2", Snf, S, 2),
        ("star-at-1", {final}, {STAR}, 1),
    ):
        (g0, g1), acc = u.gadget(name, 2)
        u.edge(g0, m1, g1, reset=True)
        u.edge(g1, sigma - m2, g1, _lt(bound))
        u.edge(g1, m2, acc, _lt(bound))
        u.edge(g1, sigma - m2, acc, _eq(bound))
        u.edge(g1, sigma, acc, _gt(bound))

    # emptiness test while a message is stored
    (g0, g1), acc = u.gadget("empty-with-message", 2)
    u.edge(g0, M, g1)
    u.edge(g1, content, g1)
    u.edge(g1, {EMPTY_TEST}, acc)

    def copy_gadget(name, before, reset_letters, body, trigger, expected):
        """Reset at a content letter, reach its label, then demand ``expected`` exactly 2 units later."""
        size = 6 if before else 5
        locs, acc = u.gadget(name, size)
        g0 = locs[0]
        if before:
            u.edge(g0, before, locs[-1])
            u.edge(locs[-1], reset_letters, locs[1], reset=True)
        else:
            u.edge(g0, reset_letters, locs[1], reset=True)
        g1, g2, g3, g4 = locs[1:5]
        u.edge(g1, body, g1)
        u.edge(g1, trigger, g2)
        u.edge(g2, S - {final}, g3)
        u.edge(g2, {final}, g4)
        for loc, want in ((g3, expected), (g4, MINUS)):
            u.edge(loc, sigma, loc, _lt(2))
            u.edge(loc, sigma - {want}, acc, _eq(2))
            u.edge(loc, sigma, acc, _gt(2))

    sends, receives = k["sends"], k["receives"]
    copy_gadget("empty-copy", None, {PLUS, HASH}, {PLUS, HASH}, {EMPTY_TEST}, HASH)

    # a send needs a wildcard in the current configuration
    (g0, g1), acc = u.gadget("send-needs-wildcard", 2)
    u.edge(g0, sigma - {HASH}, g1)
    u.edge(g1, sends, acc)

    for m in sorted(M):
        copy_gadget(f"send-writes[{m}]", S | M, {HASH}, {HASH}, {"!" + m}, m)
    for m in sorted(M):
        copy_gadget(f"send-copies[{m}]", None, {m}, content, sends, m)
    copy_gadget("send-copies[#]", {HASH}, {HASH}, {HASH}, sends, HASH)

    # a receive reads the first stored symbol
    for m in sorted(M):
        (g0, g1, g2), acc = u.gadget(f"receive-head[{m}]", 3)
        u.edge(g0, S, g1)
        u.edge(g1, sigma - {m}, g2)
        u.edge(g1, {"?" + m}, acc)
        u.edge(g2, content, g2)
        u.edge(g2, {"?" + m}, acc)

    # a receive appends a fresh wildcard after the last copy
    (g0, g1, g2, g3), acc = u.gadget("receive-appends", 4)
    u.edge(g0, content, g1, reset=True)
    u.edge(g1, receives, g2)
    u.edge(g2, sigma, g2, _le(2))
    u.edge(g2, M, g3, _gt(2))
    u.edge(g3, M, g3)
    u.edge(g2, L | {STAR}, acc)
    u.edge(g3, L | {STAR}, acc)

    for y in sorted(content):
        copy_gadget(f"receive-copies[{y}]", content, {y}, content, receives, y)

    return u.build()


def _counter_front(alphabet, c: ChannelMachine, edges: list):
    """Shared prefix: push on the initial state and every ``+``, then wait for the final state."""
    labels = sorted(c.labels)
    edges.append(Edge("l0", c.initial, (), push(), (), "l1"))
    edges.append(Edge("l1", PLUS, (), push(), (), "l1"))
    edges += [Edge("l1", l, (), NOOP, (), "l2") for l in labels]
    edges += [Edge("l2", a, (), NOOP, (), "l2") for a in sorted(alphabet.internal - {c.final})]
    edges.append(Edge("l2", c.final, (), NOOP, (), "l3"))


def gen_exclusion_net(c: ChannelMachine) -> Automaton:
    """Clockless deterministic visibly one-counter net rejecting encodings with insertion errors."""
    alphabet = encoding_alphabet(c)
    edges = []
    _counter_front(alphabet, c, edges)
    edges.append(Edge("l3", MINUS, (), pop(), (), "l3"))
    edges.append(Edge("l3", STAR, (), pop(), (), "l4"))
    return Automaton(alphabet, StoreSpec.one_counter(), {"l0", "l1", "l2", "l3", "l4"},
                     {"l0"}, {"l4"}, (), tuple(edges))


def gen_condition10_vonca(c: ChannelMachine) -> Automaton:
    """One-clock visibly one-counter automaton: the last configuration outgrew the first."""
    alphabet = encoding_alphabet(c)
    edges = []
    _counter_front(alphabet, c, edges)
    edges.append(Edge("l3", MINUS, (), pop(), (), "l3"))
    edges.append(Edge("l3", MINUS, (), EMPTY, (), "l4"))
    edges.append(Edge("l3", STAR, (), EMPTY, (), "l4"))
    for a in sorted(alphabet.letters):
        kind = alphabet.kind(a)
        if kind == "int":
            edges.append(Edge("l4", a, (), NOOP, (), "l4"))
        elif kind == "call":
            edges.append(Edge("l4", a, (), push(), (), "l4"))
        else:
            edges.append(Edge("l4", a, (), pop(), (), "l4"))
            edges.append(Edge("l4", a, (), EMPTY, (), "l4"))
    return Automaton(alphabet, StoreSpec.one_counter(), {"l0", "l1", "l2", "l3", "l4"},
                     {"l0"}, {"l4"}, (CLOCK,), tuple(edges))


def gen_universality_automaton(c: ChannelMachine) -> Automaton:
    """Visibly one-counter automaton meant to accept everything outside the error-free encodings."""
    return union(visibly_lift(gen_complement_ta(c)), gen_condition10_vonca(c))


def gadget_names(c: ChannelMachine) -> list:
    """Names of the gadgets making up :func:`gen_complement_ta` (location prefixes)."""
    return sorted({loc.rsplit(".", 1)[0] for loc in gen_complement_ta(c).locations})
