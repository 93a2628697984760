"""Deciding L(A) ⊆ L(B) for a timed automaton A and a one-clock timed counter net B.

The search unfolds the region-word graph depth first.  A node is pruned when
an ancestor on the current branch is dominated by it; reaching a bad word
means some timed word is accepted by A but not by B.  The abstract branch is
then replayed on concrete configurations to produce that timed word.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .automata import (
    Automaton,
    ConcreteState,
    Edge,
    NOOP,
    StoreSpec,
    TimedWord,
    VisiblyAlphabet,
    as_counter_net,
    membership,
    validate,
    with_clock,
)
from .regionwords import (
    JointConfiguration,
    RegionWord,
    cmax_of,
    dominated,
    encode,
    initial_words,
    is_bad,
    joint_moves,
    successor_moves,
    time_successors,
)

__all__ = [
    "InclusionError",
    "BudgetExhausted",
    "ConcretizationError",
    "TraceStep",
    "Verdict",
    "prepare",
    "check_inclusion",
    "check_universality",
    "universal_automaton",
    "concretize",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**6


class InclusionError(ValueError):
    """The inputs are outside the decidable fragment (class or alphabet mismatch)."""


class BudgetExhausted(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"budget exhausted after {budget} nodes")
        self.budget = budget


class ConcretizationError(AssertionError):
    """An abstract counterexample could not be turned into a verified timed word."""


@dataclass(frozen=True)
class TraceStep:
    letter: str
    elapse: int  # number of micro time steps before the discrete move
    edge: int  # index of the A-edge taken
    word: RegionWord

    def to_dict(self) -> dict:
        return {"letter": self.letter, "elapse": self.elapse, "edge": self.edge, "word": self.word.render()}


@dataclass(frozen=True)
class Verdict:
    included: bool
    initial: RegionWord | None = None
    trace: tuple = ()
    witness: TimedWord | None = None
    nodes: int = 0

    @property
    def abstract_trace(self) -> tuple:
        return tuple((s.letter, s.word) for s in self.trace)

    def to_dict(self) -> dict:
        doc = {"verdict": "Included" if self.included else "NotIncluded", "nodes": self.nodes}
        if not self.included:
            doc["witness"] = [[a, str(t)] for a, t in self.witness]
            doc["initial"] = self.initial.render()
            doc["abstract_trace"] = [s.to_dict() for s in self.trace]
        return doc


@dataclass(frozen=True)
class _Problem:
    a: Automaton
    b: Automaton
    cmax: int
    letters: tuple
    original_a: Automaton = field(repr=False)
    original_b: Automaton = field(repr=False)


def _fresh_clock(aut: Automaton, base: str) -> str:
    name = base
    while name in aut.clocks:
        name += "'"
    return name


def prepare(a: Automaton, b: Automaton, cmax: int | None = None) -> _Problem:
    """Check the preconditions and normalise both automata for the search."""
    ra, rb = validate(a), validate(b)
    if not ra.is_timed_automaton:
        raise InclusionError("A must be a timed automaton (no store operations)")
    if not rb.is_counter_net:
        raise InclusionError("B must be a timed counter net (no zero tests, at most one counter symbol)")
    if len(b.clocks) > 1:
        raise InclusionError(f"B must have at most one clock, found {list(b.clocks)}")
    if a.alphabet.letters != b.alphabet.letters:
        raise InclusionError(
            "A and B must share the same alphabet; "
            f"only in A: {sorted(a.alphabet.letters - b.alphabet.letters)}, "
            f"only in B: {sorted(b.alphabet.letters - a.alphabet.letters)}"
        )
    plain_a = a
    if a.store.kind != "none":
        edges = tuple(Edge(e.source, e.letter, e.guard, NOOP, e.resets, e.target) for e in a.edges)
        plain_a = Automaton(a.alphabet, StoreSpec.none(), a.locations, a.initial, a.accepting, a.clocks, edges)
    if not plain_a.clocks:
        plain_a = with_clock(plain_a, "_y")
    net_b = as_counter_net(b)
    if not net_b.clocks:
        net_b = with_clock(net_b, _fresh_clock(net_b, "_x"))
    needed = cmax_of(plain_a, net_b)
    if cmax is None:
        cmax = needed
    elif cmax < needed:
        raise InclusionError(f"cmax must exceed every guard constant (needs at least {needed})")
    return _Problem(plain_a, net_b, cmax, tuple(sorted(a.alphabet.letters)), a, b)


def _children(w: RegionWord, p: _Problem) -> list:
    out = []
    for letter in p.letters:
        seen = {}
        for k, edge, word in successor_moves(w, letter, p.a, p.b):
            seen.setdefault(word, (k, edge))
        for word in sorted(seen, key=RegionWord.render):
            k, edge = seen[word]
            out.append(TraceStep(letter, k, edge, word))
    return out


def _search(p: _Problem, budget: int):
    """Depth-first unfolding; returns ``(initial word, branch)`` or ``(None, None)`` and the node count."""
    done = set()
    nodes = 0
    for root in initial_words(p.a, p.b, p.cmax):
        if root in done:
            continue
        # each frame: (word, trace step leading here or None, children, next child index)
        stack = [[root, None, None, 0]]
        while stack:
            frame = stack[-1]
            word, _, children, idx = frame
            if children is None:
                nodes += 1
                if nodes > budget:
                    raise BudgetExhausted(budget)
                children = _children(word, p)
                frame[2] = children
                for child in children:
                    if is_bad(child.word, p.a, p.b):
                        branch = [f[1] for f in stack[1:]] + [child]
                        return root, branch, nodes
            if idx >= len(children):
                done.add(word)
                stack.pop()
                continue
            frame[3] = idx + 1
            child = children[idx]
            if child.word in done:
                continue
            if any(dominated(f[0], child.word) for f in stack):
                continue
            stack.append([child.word, child, None, 0])
    return None, None, nodes


def check_inclusion(a: Automaton, b: Automaton, budget: int = DEFAULT_BUDGET, cmax: int | None = None) -> Verdict:
    """Decide whether every timed word accepted by ``a`` is accepted by ``b``.

    Raises :class:`BudgetExhausted` if more than ``budget`` nodes are expanded.
    """
    p = prepare(a, b, cmax)
    root, branch, nodes = _search(p, budget)
    if root is None:
        return Verdict(True, nodes=nodes)
    witness = _concretize(root, branch, p)
    return Verdict(False, root, tuple(branch), witness, nodes)


def universal_automaton(alphabet: VisiblyAlphabet) -> Automaton:
    edges = tuple(Edge("u", a, (), NOOP, frozenset(), "u") for a in sorted(alphabet.letters))
    return Automaton(alphabet, StoreSpec.none(), {"u"}, {"u"}, {"u"}, (), edges)


def check_universality(b: Automaton, budget: int = DEFAULT_BUDGET, cmax: int | None = None) -> Verdict:
    return check_inclusion(universal_automaton(b.alphabet), b, budget, cmax)


def _delay_grid(c: JointConfiguration, cmax: int) -> list:
    values = [v for _, v in c.a_state.valuation]
    values += [v for s in c.b_states for _, v in s.valuation]
    bounds = {Fraction(0)}
    for v in values:
        for k in range(math.ceil(v), cmax + 2):
            bounds.add(Fraction(k) - v)
    bounds = sorted(bounds)
    grid = []
    for lo, hi in zip(bounds, bounds[1:]):
        grid += [lo, (lo + hi) / 2]
    grid += [bounds[-1], bounds[-1] + 1]
    return grid


def _elapse(c: JointConfiguration, delay) -> JointConfiguration:
    a = c.a_state
    a2 = ConcreteState(a.location, tuple((x, v + delay) for x, v in a.valuation), a.store)
    bs = {ConcreteState(s.location, tuple((x, v + delay) for x, v in s.valuation), s.store) for s in c.b_states}
    return JointConfiguration(a2, frozenset(bs), c.dimension)


def _concretize(root: RegionWord, branch: list, p: _Problem) -> TimedWord:
    dim = p.b.store.dimension
    a_loc = root.a_location
    a_state = ConcreteState(a_loc, tuple((y, Fraction(0)) for y in p.a.clocks), ())
    b_states = {ConcreteState(l, ((x, Fraction(0)),), (0,) * dim) for l in p.b.initial for x in p.b.clocks}
    config = JointConfiguration(a_state, frozenset(b_states), dim)
    if encode(config, p.cmax) != root:
        raise ConcretizationError("initial word does not match the initial configuration")
    now = Fraction(0)
    events = []
    for s in branch:
        target = time_successors(encode(config, p.cmax))[s.elapse]
        for delay in _delay_grid(config, p.cmax):
            if encode(_elapse(config, delay), p.cmax) == target:
                break
        else:
            raise ConcretizationError(f"no delay realises elapse step {s.elapse} before {s.letter!r}")
        moves = dict(joint_moves(config, delay, s.letter, p.a, p.b))
        if s.edge not in moves:
            raise ConcretizationError(f"A-edge {s.edge} not enabled after delay {delay}")
        config = moves[s.edge]
        if encode(config, p.cmax) != s.word:
            raise ConcretizationError(f"concrete step does not reproduce {s.word.render()}")
        now += delay
        events.append((s.letter, now))
    witness = TimedWord(tuple(events))
    if not membership(p.original_a, witness).accepted:
        raise ConcretizationError(f"witness {witness} is not accepted by A")
    if membership(p.original_b, witness).accepted:
        raise ConcretizationError(f"witness {witness} is accepted by B")
    return witness


def concretize(initial: RegionWord, trace, a: Automaton, b: Automaton, cmax: int | None = None) -> TimedWord:
    """Replay an abstract branch ending in a bad word on concrete configurations."""
    p = prepare(a, b, cmax if cmax is not None else initial.cmax)
    return _concretize(initial, list(trace), p)
