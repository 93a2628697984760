"""Timed words, timed automata with a stack or counters, and their exact semantics.

One :class:`Automaton` type covers plain timed automata, timed pushdown
automata (and the one-counter special case, a singleton stack alphabet) and
timed counter nets.  Which class an automaton belongs to is a property checked
by :func:`validate`, not a separate type.

All time values are :class:`fractions.Fraction`, so every computation is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "AutomatonError",
    "WordError",
    "VisiblyAlphabet",
    "TimedWord",
    "Atom",
    "StoreSpec",
    "StackOp",
    "NOOP",
    "EMPTY",
    "push",
    "pop",
    "Edge",
    "Automaton",
    "ConcreteState",
    "Step",
    "Run",
    "ClassReport",
    "Membership",
    "validate",
    "initial_states",
    "step",
    "simulate",
    "membership",
    "union",
    "visibly_lift",
    "as_counter_net",
    "with_clock",
    "reset_dead_clocks",
    "COUNTER_SYMBOL",
]

RELATIONS = ("<", "<=", "=", ">=", ">")
_REL_ALIASES = {"==": "=", "≤": "<=", "≥": ">="}

# stack symbol used whenever a one-counter store is built from scratch
COUNTER_SYMBOL = "1"


class AutomatonError(ValueError):
    """Structural problem with an automaton (dangling location, bad symbol, ...)."""


class WordError(ValueError):
    """A timed word is malformed or uses letters outside the alphabet."""


def as_time(value) -> Fraction:
    """Convert ``value`` to an exact rational; floats are rejected."""
    if isinstance(value, float):
        raise WordError(f"refusing inexact float timestamp {value!r}; use a string or Fraction")
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise WordError(f"bad timestamp {value!r}") from exc


@dataclass(frozen=True)
class VisiblyAlphabet:
    internal: frozenset = frozenset()
    call: frozenset = frozenset()
    ret: frozenset = frozenset()

    def __post_init__(self):
        for name in ("internal", "call", "ret"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if (self.internal & self.call) or (self.internal & self.ret) or (self.call & self.ret):
            raise AutomatonError("alphabet partition classes must be pairwise disjoint")
        if not self.letters:
            raise AutomatonError("alphabet must not be empty")

    @classmethod
    def flat(cls, letters: Iterable[str]) -> "VisiblyAlphabet":
        return cls(internal=frozenset(letters))

    @property
    def letters(self) -> frozenset:
        return self.internal | self.call | self.ret

    def kind(self, letter: str) -> str:
        if letter in self.internal:
            return "int"
        if letter in self.call:
            return "call"
        if letter in self.ret:
            return "ret"
        raise WordError(f"letter {letter!r} not in alphabet")

    def ordered(self) -> list:
        return sorted(self.letters)

    def __contains__(self, letter) -> bool:
        return letter in self.letters


@dataclass(frozen=True)
class TimedWord:
    """A nonempty finite sequence of ``(letter, timestamp)`` with nondecreasing times."""

    events: tuple

    def __post_init__(self):
        events = tuple((letter, as_time(t)) for letter, t in self.events)
        if not events:
            raise WordError("a timed word must be nonempty")
        prev = Fraction(0)
        for letter, t in events:
            if t < 0:
                raise WordError(f"negative timestamp {t}")
            if t < prev:
                raise WordError(f"timestamps must be nondecreasing ({prev} then {t})")
            prev = t
        object.__setattr__(self, "events", events)

    @classmethod
    def of(cls, *pairs) -> "TimedWord":
        return cls(tuple(pairs))

    def __iter__(self) -> Iterator:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    @property
    def letters(self) -> tuple:
        return tuple(a for a, _ in self.events)

    @property
    def timestamps(self) -> tuple:
        return tuple(t for _, t in self.events)

    def delays(self) -> list:
        out, prev = [], Fraction(0)
        for _, t in self.events:
            out.append(t - prev)
            prev = t
        return out

    def shifted(self, offset) -> "TimedWord":
        offset = as_time(offset)
        return TimedWord(tuple((a, t + offset) for a, t in self.events))

    def is_strictly_monotonic(self) -> bool:
        ts = self.timestamps
        return all(x < y for x, y in zip(ts, ts[1:]))

    def __str__(self) -> str:
        return "".join(f"({a},{t})" for a, t in self.events)


@dataclass(frozen=True, order=True)
class Atom:
    """A clock constraint atom ``clock rel bound``."""

    clock: str
    rel: str
    bound: int

    def __post_init__(self):
        rel = _REL_ALIASES.get(self.rel, self.rel)
        if rel not in RELATIONS:
            raise AutomatonError(f"unknown relation {self.rel!r}")
        if not isinstance(self.bound, int) or isinstance(self.bound, bool) or self.bound < 0:
            raise AutomatonError(f"clock bound must be a natural number, got {self.bound!r}")
        object.__setattr__(self, "rel", rel)

    def holds(self, value: Fraction) -> bool:
        c = self.bound
        rel = self.rel
        if rel == "<":
            return value < c
        if rel == "<=":
            return value <= c
        if rel == "=":
            return value == c
        if rel == ">=":
            return value >= c
        return value > c

    def __str__(self) -> str:
        return f"{self.clock}{self.rel}{self.bound}"


def guard_holds(guard: Sequence[Atom], valuation: dict) -> bool:
    return all(atom.holds(valuation[atom.clock]) for atom in guard)


@dataclass(frozen=True)
class StoreSpec:
    """``kind`` is ``"none"``, ``"stack"`` (with ``stack_alphabet``) or ``"counters"``."""

    kind: str = "none"
    stack_alphabet: frozenset = frozenset()
    dimension: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "stack", "counters"):
            raise AutomatonError(f"unknown store kind {self.kind!r}")
        object.__setattr__(self, "stack_alphabet", frozenset(self.stack_alphabet))
        if self.kind == "stack" and not self.stack_alphabet:
            raise AutomatonError("a stack needs a nonempty stack alphabet")
        if self.kind == "counters" and self.dimension < 0:
            raise AutomatonError("counter dimension must be >= 0")

    @classmethod
    def none(cls) -> "StoreSpec":
        return cls("none")

    @classmethod
    def stack(cls, symbols: Iterable[str]) -> "StoreSpec":
        return cls("stack", stack_alphabet=frozenset(symbols))

    @classmethod
    def one_counter(cls) -> "StoreSpec":
        return cls("stack", stack_alphabet=frozenset({COUNTER_SYMBOL}))

    @classmethod
    def counters(cls, n: int) -> "StoreSpec":
        return cls("counters", dimension=n)

    def empty_content(self) -> tuple:
        if self.kind == "counters":
            return (0,) * self.dimension
        return ()


@dataclass(frozen=True, order=True)
class StackOp:
    kind: str  # push | pop | noop | empty?
    symbol: str | None = None

    def __post_init__(self):
        if self.kind not in ("push", "pop", "noop", "empty?"):
            raise AutomatonError(f"unknown stack operation {self.kind!r}")
        if self.kind in ("push", "pop") and self.symbol is None:
            raise AutomatonError(f"{self.kind} needs a stack symbol")

    def __str__(self) -> str:
        return f"{self.kind}({self.symbol})" if self.symbol is not None else self.kind


NOOP = StackOp("noop")
EMPTY = StackOp("empty?")


def push(symbol: str = COUNTER_SYMBOL) -> StackOp:
    return StackOp("push", symbol)


def pop(symbol: str = COUNTER_SYMBOL) -> StackOp:
    return StackOp("pop", symbol)


Op = Union[StackOp, tuple]


@dataclass(frozen=True)
class Edge:
    source: str
    letter: str
    guard: tuple = ()
    op: Op = NOOP
    resets: frozenset = frozenset()
    target: str = ""

    def __post_init__(self):
        object.__setattr__(self, "guard", tuple(self.guard))
        object.__setattr__(self, "resets", frozenset(self.resets))
        if isinstance(self.op, list):
            object.__setattr__(self, "op", tuple(self.op))

    def __str__(self) -> str:
        guard = " & ".join(map(str, self.guard)) or "true"
        resets = ",".join(sorted(self.resets))
        return f"{self.source} --{self.letter}, {guard}, {self.op}, {{{resets}}}--> {self.target}"


@dataclass(frozen=True)
class Automaton:
    alphabet: VisiblyAlphabet
    store: StoreSpec
    locations: frozenset
    initial: frozenset
    accepting: frozenset
    clocks: tuple
    edges: tuple
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "locations", frozenset(self.locations))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "clocks", tuple(sorted(set(self.clocks))))
        object.__setattr__(self, "edges", tuple(self.edges))
        self._check_structure()
        index: dict = {}
        for e in self.edges:
            index.setdefault((e.source, e.letter), []).append(e)
        object.__setattr__(self, "_index", index)

    def _check_structure(self):
        if not self.initial <= self.locations:
            raise AutomatonError(f"initial locations {sorted(self.initial - self.locations)} are not locations")
        if not self.accepting <= self.locations:
            raise AutomatonError(f"accepting locations {sorted(self.accepting - self.locations)} are not locations")
        clocks = set(self.clocks)
        for i, e in enumerate(self.edges):
            where = f"edge {i} ({e})"
            if e.source not in self.locations or e.target not in self.locations:
                raise AutomatonError(f"{where}: endpoint is not a location")
            if e.letter not in self.alphabet:
                raise AutomatonError(f"{where}: letter {e.letter!r} not in alphabet")
            for atom in e.guard:
                if atom.clock not in clocks:
                    raise AutomatonError(f"{where}: guard uses unknown clock {atom.clock!r}")
            if not e.resets <= clocks:
                raise AutomatonError(f"{where}: resets unknown clocks {sorted(e.resets - clocks)}")
            self._check_op(e.op, where)

    def _check_op(self, op, where):
        kind = self.store.kind
        if kind == "counters":
            if not isinstance(op, tuple) or len(op) != self.store.dimension:
                raise AutomatonError(f"{where}: counter update must be a vector of length {self.store.dimension}")
            if any(c not in (-1, 0, 1) for c in op):
                raise AutomatonError(f"{where}: counter updates must lie in {{-1,0,1}}")
            return
        if not isinstance(op, StackOp):
            raise AutomatonError(f"{where}: stack operation expected, got {op!r}")
        if kind == "none" and op != NOOP:
            raise AutomatonError(f"{where}: automaton without store only allows noop")
        if op.symbol is not None and op.symbol not in self.store.stack_alphabet:
            raise AutomatonError(f"{where}: stack symbol {op.symbol!r} not in stack alphabet")

    def edges_from(self, location, letter) -> list:
        return self._index.get((location, letter), [])

    def max_constant(self) -> int:
        return max((atom.bound for e in self.edges for atom in e.guard), default=0)

    @property
    def is_one_counter_stack(self) -> bool:
        return self.store.kind == "stack" and len(self.store.stack_alphabet) == 1


@dataclass(frozen=True, order=True)
class ConcreteState:
    """``valuation`` is a tuple of ``(clock, value)`` pairs in clock order.

    ``store`` is the stack word (top first) for stacks, the counter vector for
    counter nets, and ``()`` otherwise.
    """

    location: str
    valuation: tuple
    store: tuple = ()

    def clock(self, name) -> Fraction:
        for c, v in self.valuation:
            if c == name:
                return v
        raise KeyError(name)

    def values(self) -> dict:
        return dict(self.valuation)

    @property
    def counter(self) -> int:
        """Counter value of a one-counter automaton (the stack height)."""
        return len(self.store)

    def __str__(self) -> str:
        vals = ",".join(f"{c}={v}" for c, v in self.valuation)
        return f"({self.location},[{vals}],{self.store})"


@dataclass(frozen=True)
class Step:
    source: ConcreteState
    delay: Fraction
    letter: str
    target: ConcreteState


@dataclass(frozen=True)
class Run:
    steps: tuple

    def word(self) -> TimedWord:
        t, events = Fraction(0), []
        for s in self.steps:
            t += s.delay
            events.append((s.letter, t))
        return TimedWord(tuple(events))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class ClassReport:
    is_timed_automaton: bool
    is_tpda: bool
    is_one_counter: bool
    is_counter_net: bool
    is_visibly: bool
    is_deterministic_clockless_visibly_net: bool
    is_one_clock: bool
    reasons: tuple = ()


def _op_is_inert(op) -> bool:
    if isinstance(op, StackOp):
        return op == NOOP
    return not any(op)


def _op_class(aut: Automaton, op) -> str | None:
    """'int', 'call' or 'ret' for the operation, None when it has no visibly class."""
    if isinstance(op, StackOp):
        return {"noop": "int", "push": "call", "pop": "ret", "empty?": "ret"}[op.kind]
    if aut.store.dimension != 1:
        return None
    return {0: "int", 1: "call", -1: "ret"}[op[0]]


def validate(aut: Automaton) -> ClassReport:
    """Report which automaton classes ``aut`` belongs to.

    A timed automaton here is any automaton whose edges never touch the store.
    Visibly-ness is only meaningful for stacks and one-dimensional counters.
    """
    reasons = []
    store = aut.store
    ops = [e.op for e in aut.edges]
    is_ta = all(_op_is_inert(op) for op in ops)
    is_tpda = store.kind in ("none", "stack") or (store.kind == "counters" and store.dimension <= 1)
    has_zero_test = any(op == EMPTY for op in ops)
    is_one_counter = (
        aut.is_one_counter_stack
        or store.kind == "none"
        or (store.kind == "counters" and store.dimension <= 1)
    )
    if store.kind == "stack" and not aut.is_one_counter_stack:
        reasons.append("stack alphabet has more than one symbol")
    is_counter_net = (store.kind in ("none", "counters") or aut.is_one_counter_stack) and not has_zero_test
    if has_zero_test:
        reasons.append("uses zero tests (empty?)")

    is_visibly = True
    for i, e in enumerate(aut.edges):
        cls = _op_class(aut, e.op)
        if cls is None:
            is_visibly = False
            reasons.append("visibly classes undefined for this store")
            break
        if cls != aut.alphabet.kind(e.letter):
            is_visibly = False
            reasons.append(f"edge {i} ({e}) uses a {cls} operation on a {aut.alphabet.kind(e.letter)} letter")
            break

    deterministic = False
    if aut.clocks:
        reasons.append("determinism is only defined for clockless nets")
    elif not (is_visibly and is_one_counter and is_counter_net):
        reasons.append("determinism is only defined for visibly one-counter nets")
    else:
        deterministic = True
        for (loc, letter), edges in aut._index.items():
            for e1, e2 in itertools.combinations(edges, 2):
                kinds = {_op_kind(e1.op), _op_kind(e2.op)}
                if kinds != {"pop", "empty?"}:
                    deterministic = False
                    reasons.append(f"two {letter!r}-edges leave {loc!r}")
                    break
            if not deterministic:
                break

    return ClassReport(
        is_timed_automaton=is_ta,
        is_tpda=is_tpda,
        is_one_counter=is_one_counter,
        is_counter_net=is_counter_net,
        is_visibly=is_visibly,
        is_deterministic_clockless_visibly_net=deterministic,
        is_one_clock=len(aut.clocks) == 1,
        reasons=tuple(reasons),
    )


def _op_kind(op) -> str:
    if isinstance(op, StackOp):
        return op.kind
    return {0: "noop", 1: "push", -1: "pop"}.get(op[0], "vector") if len(op) == 1 else "vector"


def initial_states(aut: Automaton) -> list:
    zero = tuple((c, Fraction(0)) for c in aut.clocks)
    content = aut.store.empty_content()
    return [ConcreteState(loc, zero, content) for loc in sorted(aut.initial)]


def _apply_op(aut: Automaton, op, content: tuple):
    """New store content, or None when the operation blocks."""
    if aut.store.kind == "counters":
        new = tuple(v + c for v, c in zip(content, op))
        return None if any(v < 0 for v in new) else new
    kind = op.kind
    if kind == "noop":
        return content
    if kind == "push":
        return (op.symbol,) + content
    if kind == "pop":
        return content[1:] if content and content[0] == op.symbol else None
    return content if not content else None


def _successors(aut: Automaton, state: ConcreteState, delay: Fraction, letter: str) -> list:
    """Successors in edge order, without duplicates; ``delay`` is already exact."""
    edges = aut.edges_from(state.location, letter)
    if not edges:
        return []
    elapsed = {c: v + delay for c, v in state.valuation}
    out = {}
    for e in edges:
        if not guard_holds(e.guard, elapsed):
            continue
        content = _apply_op(aut, e.op, state.store)
        if content is None:
            continue
        val = tuple((c, Fraction(0) if c in e.resets else v) for c, v in elapsed.items())
        out.setdefault(ConcreteState(e.target, val, content), None)
    return list(out)


def step(aut: Automaton, state: ConcreteState, delay, letter: str) -> set:
    """All successors of ``state`` after waiting ``delay`` and reading ``letter``."""
    delay = as_time(delay)
    if delay < 0:
        raise WordError("delays must be nonnegative")
    return set(_successors(aut, state, delay, letter))


def _check_letters(aut: Automaton, w: TimedWord):
    for a, _ in w:
        if a not in aut.alphabet:
            raise WordError(f"letter {a!r} not in the automaton's alphabet")


def simulate(aut: Automaton, w: TimedWord) -> list:
    """Sets of reachable states after each prefix; element 0 is the initial set."""
    _check_letters(aut, w)
    frontier = set(initial_states(aut))
    history = [frontier]
    for a, delay in zip(w.letters, w.delays()):
        nxt = set()
        for s in frontier:
            nxt.update(_successors(aut, s, delay, a))
        frontier = nxt
        history.append(frontier)
    return history


@dataclass(frozen=True)
class Membership:
    accepted: bool
    witness: Run | None = None

    def __bool__(self) -> bool:
        return self.accepted


def membership(aut: Automaton, w: TimedWord) -> Membership:
    """Breadth-first state-set simulation; returns an accepting run when one exists."""
    if not isinstance(w, TimedWord):
        w = TimedWord(tuple(w))
    _check_letters(aut, w)
    frontier = {s: None for s in initial_states(aut)}
    layers = [frontier]
    for a, delay in zip(w.letters, w.delays()):
        nxt: dict = {}
        for s in frontier:
            for t in _successors(aut, s, delay, a):
                nxt.setdefault(t, s)
        frontier = nxt
        layers.append(frontier)
        if not frontier:
            return Membership(False)
    finals = sorted(s for s in frontier if s.location in aut.accepting)
    if not finals:
        return Membership(False)
    delays = w.delays()
    steps, cur = [], finals[0]
    for i in range(len(w), 0, -1):
        prev = layers[i][cur]
        steps.append(Step(prev, delays[i - 1], w.letters[i - 1], cur))
        cur = prev
    return Membership(True, Run(tuple(reversed(steps))))


def _rename(locations, taken) -> dict:
    mapping = {}
    used = set(taken)
    for loc in sorted(locations):
        new = loc
        while new in used:
            new = new + "'"
        mapping[loc] = new
        used.add(new)
    return mapping


def union(a1: Automaton, a2: Automaton) -> Automaton:
    """Disjoint union; colliding location names of ``a2`` get primes appended."""
    if a1.alphabet != a2.alphabet:
        raise AutomatonError("union needs identical alphabet partitions")
    if a1.store != a2.store:
        raise AutomatonError("union needs identical store specifications")
    m = _rename(a2.locations, a1.locations)
    edges = list(a1.edges) + [
        Edge(m[e.source], e.letter, e.guard, e.op, e.resets, m[e.target]) for e in a2.edges
    ]
    return Automaton(
        alphabet=a1.alphabet,
        store=a1.store,
        locations=a1.locations | {m[l] for l in a2.locations},
        initial=a1.initial | {m[l] for l in a2.initial},
        accepting=a1.accepting | {m[l] for l in a2.accepting},
        clocks=a1.clocks + tuple(c for c in a2.clocks if c not in a1.clocks),
        edges=tuple(edges),
    )


def visibly_lift(aut: Automaton) -> Automaton:
    """Turn a store-free automaton into an equivalent visibly one-counter automaton."""
    if aut.store.kind != "none":
        raise AutomatonError("visibly_lift expects an automaton without store")
    edges = []
    for e in aut.edges:
        kind = aut.alphabet.kind(e.letter)
        if kind == "int":
            edges.append(e)
        elif kind == "call":
            edges.append(Edge(e.source, e.letter, e.guard, push(), e.resets, e.target))
        else:
            edges.append(Edge(e.source, e.letter, e.guard, pop(), e.resets, e.target))
            edges.append(Edge(e.source, e.letter, e.guard, EMPTY, e.resets, e.target))
    return Automaton(aut.alphabet, StoreSpec.one_counter(), aut.locations, aut.initial,
                     aut.accepting, aut.clocks, tuple(edges))


def as_counter_net(aut: Automaton) -> Automaton:
    """Re-express ``aut`` with a counter-vector store.

    Store-free automata become 0-dimensional nets, one-counter stacks without
    zero tests become 1-dimensional nets.
    """
    store = aut.store
    if store.kind == "counters":
        return aut
    if store.kind == "none":
        dim, conv = 0, lambda op: ()
    elif aut.is_one_counter_stack:
        if any(e.op == EMPTY for e in aut.edges):
            raise AutomatonError("zero tests cannot be expressed in a counter net")
        dim = 1
        conv = lambda op: ({"noop": 0, "push": 1, "pop": -1}[op.kind],)
    else:
        raise AutomatonError("only store-free or one-counter automata convert to counter nets")
    edges = tuple(Edge(e.source, e.letter, e.guard, conv(e.op), e.resets, e.target) for e in aut.edges)
    return Automaton(aut.alphabet, StoreSpec.counters(dim), aut.locations, aut.initial,
                     aut.accepting, aut.clocks, edges)


def with_clock(aut: Automaton, name: str) -> Automaton:
    """Add an unused clock (used to give clockless automata a clock item)."""
    if name in aut.clocks:
        raise AutomatonError(f"clock {name!r} already present")
    return Automaton(aut.alphabet, aut.store, aut.locations, aut.initial, aut.accepting,
                     aut.clocks + (name,), aut.edges)


def reset_dead_clocks(aut: Automaton) -> Automaton:
    """Reset every clock on edges entering a location where its value is never read again.

    The accepted language is unchanged, but states that differ only in a dead
    clock collapse during simulation, which keeps state sets small.
    """
    live = {c: set() for c in aut.clocks}
    for c in aut.clocks:
        changed = True
        while changed:
            changed = False
            for e in aut.edges:
                if e.source in live[c]:
                    continue
                reads = any(atom.clock == c for atom in e.guard)
                if reads or (c not in e.resets and e.target in live[c]):
                    live[c].add(e.source)
                    changed = True
    edges = tuple(
        Edge(e.source, e.letter, e.guard, e.op,
             e.resets | {c for c in aut.clocks if e.target not in live[c]}, e.target)
        for e in aut.edges
    )
    return Automaton(aut.alphabet, aut.store, aut.locations, aut.initial, aut.accepting, aut.clocks, edges)


def stack_heights(run: Run) -> list:
    return [len(s.target.store) for s in run.steps]
