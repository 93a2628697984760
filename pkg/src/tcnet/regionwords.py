"""Region words: the finite abstraction of a joint configuration of a timed
automaton A and a one-clock timed counter net B.

A joint configuration pairs one concrete state of A with the set of concrete
states B can be in after reading the same timed word.  Its encoding groups all
clock values into blocks: values with zero fractional part, then one block per
distinct fractional part in increasing order, then values above ``cmax``.
Every value is replaced by its integer part (its *reg*), or ``TOP`` above
``cmax``.

Time elapse and discrete steps are computed directly on region words; tests
compare the result against concrete simulation on sampled representatives.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .automata import Automaton, ConcreteState, Edge, guard_holds, step
from .wqo import embed_leq, subset_leq, vec_leq

__all__ = [
    "TOP",
    "Item",
    "RegionWord",
    "JointConfiguration",
    "RegionParseError",
    "cmax_of",
    "encode",
    "equivalent",
    "time_successors",
    "discrete_successors",
    "successors",
    "successor_moves",
    "dominated",
    "is_bad",
    "initial_words",
    "representative",
    "parse_region_word",
    "joint_moves",
    "atom_holds_in_region",
]

TOP = math.inf

ZERO, FRAC, TOPPOS = "zero", "frac", "top"


class RegionParseError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Item:
    """One clock of one tracked state: owner ``"A"`` or ``"B"``, its location, clock, reg and counters."""

    owner: str
    location: str
    clock: str
    reg: float
    counters: tuple = ()

    def with_reg(self, reg) -> "Item":
        return Item(self.owner, self.location, self.clock, reg, self.counters)

    def __str__(self) -> str:
        reg = "T" if self.reg == TOP else str(int(self.reg))
        ctr = ",".join(map(str, self.counters))
        return f"{self.owner}:{self.location}.{self.clock}@{reg}[{ctr}]"


def _sorted_items(block) -> list:
    return sorted(block, key=lambda it: str(it))


@dataclass(frozen=True)
class RegionWord:
    zero: frozenset
    frac: tuple
    top: frozenset
    cmax: int

    def __post_init__(self):
        object.__setattr__(self, "zero", frozenset(self.zero))
        object.__setattr__(self, "frac", tuple(frozenset(b) for b in self.frac))
        object.__setattr__(self, "top", frozenset(self.top))
        if any(not b for b in self.frac):
            raise ValueError("fractional blocks must be nonempty")
        for it in self.zero:
            if not 0 <= it.reg <= self.cmax:
                raise ValueError(f"zero-block item {it} out of range")
        for b in self.frac:
            for it in b:
                if not 0 <= it.reg <= self.cmax - 1:
                    raise ValueError(f"fractional item {it} out of range")
        for it in self.top:
            if it.reg != TOP:
                raise ValueError(f"top item {it} must carry reg T")

    def blocks(self) -> tuple:
        """The literal block word: zero block, fractional blocks, top block."""
        return (self.zero,) + self.frac + (self.top,)

    def positioned(self) -> Iterable:
        """Yield ``(item, block index, position kind)``; index ``len(frac)+1`` is the top block."""
        for it in self.zero:
            yield it, 0, ZERO
        for i, b in enumerate(self.frac, start=1):
            for it in b:
                yield it, i, FRAC
        for it in self.top:
            yield it, len(self.frac) + 1, TOPPOS

    def items(self) -> list:
        return [it for it, _, _ in self.positioned()]

    def a_items(self) -> list:
        return [it for it in self.items() if it.owner == "A"]

    def b_items(self) -> list:
        return [it for it in self.items() if it.owner == "B"]

    @property
    def a_location(self) -> str:
        locs = {it.location for it in self.a_items()}
        if len(locs) != 1:
            raise ValueError(f"region word must have exactly one A-location, found {sorted(locs)}")
        return next(iter(locs))

    def render(self) -> str:
        def block(b):
            return "{" + ",".join(str(it) for it in _sorted_items(b)) + "}"

        return "".join(block(b) for b in (self.zero,) + self.frac) + "|" + block(self.top)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class JointConfiguration:
    """A concrete A-state together with the set of concrete B-states.

    ``dimension`` is B's counter dimension; it fixes the zero vector attached
    to A-items even when the B-set is empty.
    """

    a_state: ConcreteState
    b_states: frozenset
    dimension: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b_states", frozenset(self.b_states))
        for s in self.b_states:
            if len(s.store) != self.dimension:
                raise ValueError(f"B-state {s} has wrong counter dimension")


def cmax_of(a: Automaton, b: Automaton) -> int:
    return max(a.max_constant(), b.max_constant()) + 1


def _split(value: Fraction):
    whole = math.floor(value)
    return whole, value - whole


def encode(c: JointConfiguration, cmax: int) -> RegionWord:
    zero_vec = (0,) * c.dimension
    valued = [
        (Item("A", c.a_state.location, clock, 0, zero_vec), v) for clock, v in c.a_state.valuation
    ]
    for s in c.b_states:
        for clock, v in s.valuation:
            valued.append((Item("B", s.location, clock, 0, tuple(s.store)), v))
    zero, top, by_frac = set(), set(), {}
    for it, v in valued:
        if v < 0:
            raise ValueError("clock values must be nonnegative")
        if v > cmax:
            top.add(it.with_reg(TOP))
            continue
        whole, frac = _split(v)
        item = it.with_reg(whole)
        if frac == 0:
            zero.add(item)
        else:
            by_frac.setdefault(frac, set()).add(item)
    frac_blocks = tuple(frozenset(by_frac[f]) for f in sorted(by_frac))
    return RegionWord(frozenset(zero), frac_blocks, frozenset(top), cmax)


def equivalent(c1: JointConfiguration, c2: JointConfiguration, cmax: int) -> bool:
    return encode(c1, cmax) == encode(c2, cmax)


def _micro_elapse(w: RegionWord) -> RegionWord | None:
    if w.zero:
        to_top = {it.with_reg(TOP) for it in w.zero if it.reg == w.cmax}
        rest = frozenset(it for it in w.zero if it.reg != w.cmax)
        frac = ((rest,) if rest else ()) + w.frac
        return RegionWord(frozenset(), frac, w.top | to_top, w.cmax)
    if w.frac:
        last = w.frac[-1]
        zero = frozenset(it.with_reg(it.reg + 1) for it in last)
        return RegionWord(zero, w.frac[:-1], w.top, w.cmax)
    return None


def time_successors(w: RegionWord) -> list:
    """The chain of words reachable by letting time pass, starting with ``w`` itself."""
    chain = [w]
    while True:
        nxt = _micro_elapse(chain[-1])
        if nxt is None:
            return chain
        chain.append(nxt)


def atom_holds_in_region(rel: str, bound: int, reg, position: str) -> bool:
    if position == TOPPOS:
        return rel in (">", ">=")
    if rel == "=":
        return position == ZERO and reg == bound
    if rel == "<":
        return reg < bound
    if rel == "<=":
        return reg < bound or (position == ZERO and reg == bound)
    if rel == ">=":
        return reg >= bound
    return reg > bound or (position == FRAC and reg == bound)


def _guard_holds(edge: Edge, where: dict) -> bool:
    for atom in edge.guard:
        reg, position = where[atom.clock]
        if not atom_holds_in_region(atom.rel, atom.bound, reg, position):
            return False
    return True


def _build(placed: Iterable, n_frac: int, cmax: int) -> RegionWord:
    """Assemble a word from ``(item, block index)`` pairs, dropping emptied fractional blocks."""
    zero, top = set(), set()
    frac = [set() for _ in range(n_frac)]
    for it, idx in placed:
        if idx == 0:
            zero.add(it)
        elif idx == n_frac + 1:
            top.add(it)
        else:
            frac[idx - 1].add(it)
    return RegionWord(frozenset(zero), tuple(frozenset(b) for b in frac if b), frozenset(top), cmax)


def _b_successor_items(w: RegionWord, letter: str, b: Automaton) -> list:
    out = set()
    for it, idx, pos in w.positioned():
        if it.owner != "B":
            continue
        for e in b.edges_from(it.location, letter):
            if not _guard_holds(e, {it.clock: (it.reg, pos)}):
                continue
            counters = tuple(u + c for u, c in zip(it.counters, e.op))
            if any(u < 0 for u in counters):
                continue
            if it.clock in e.resets:
                out.add((Item("B", e.target, it.clock, 0, counters), 0))
            else:
                out.add((Item("B", e.target, it.clock, it.reg, counters), idx))
    return sorted(out, key=lambda p: (p[1], str(p[0])))


def _discrete_moves(w: RegionWord, letter: str, a: Automaton, b: Automaton) -> list:
    a_placed = [(it, idx, pos) for it, idx, pos in w.positioned() if it.owner == "A"]
    where = {it.clock: (it.reg, pos) for it, _, pos in a_placed}
    location = w.a_location
    b_items = None
    moves = []
    for edge_index, e in enumerate(a.edges):
        if e.source != location or e.letter != letter or not _guard_holds(e, where):
            continue
        if b_items is None:
            b_items = _b_successor_items(w, letter, b)
        placed = []
        for it, idx, _ in a_placed:
            if it.clock in e.resets:
                placed.append((Item("A", e.target, it.clock, 0, it.counters), 0))
            else:
                placed.append((Item("A", e.target, it.clock, it.reg, it.counters), idx))
        moves.append((edge_index, _build(placed + b_items, len(w.frac), w.cmax)))
    return moves


def discrete_successors(w: RegionWord, letter: str, a: Automaton, b: Automaton) -> set:
    return {word for _, word in _discrete_moves(w, letter, a, b)}


def successor_moves(w: RegionWord, letter: str, a: Automaton, b: Automaton) -> list:
    """All ``(elapse steps, A-edge index, successor)`` triples, in exploration order."""
    moves = []
    for k, t in enumerate(time_successors(w)):
        for edge_index, word in _discrete_moves(t, letter, a, b):
            moves.append((k, edge_index, word))
    return moves


def successors(w: RegionWord, letter: str, a: Automaton, b: Automaton) -> set:
    return {word for _, _, word in successor_moves(w, letter, a, b)}


def _item_leq(i1: Item, i2: Item) -> bool:
    return (
        i1.owner == i2.owner
        and i1.location == i2.location
        and i1.clock == i2.clock
        and i1.reg == i2.reg
        and vec_leq(i1.counters, i2.counters)
    )


_block_leq = subset_leq(_item_leq)
_word_leq = embed_leq(_block_leq)


def dominated(w1: RegionWord, w2: RegionWord) -> bool:
    """``w1`` is below ``w2`` in the well-quasi-order used for pruning."""
    if w1.cmax != w2.cmax:
        raise ValueError("words built with different cmax are not comparable")
    return _word_leq(w1.blocks(), w2.blocks())


def is_bad(w: RegionWord, a: Automaton, b: Automaton) -> bool:
    if w.a_location not in a.accepting:
        return False
    return not any(it.location in b.accepting for it in w.b_items())


def initial_words(a: Automaton, b: Automaton, cmax: int) -> list:
    dim = b.store.dimension
    zero_vec = (0,) * dim
    b_items = {Item("B", l, x, 0, zero_vec) for l in b.initial for x in b.clocks}
    words = []
    for l0 in sorted(a.initial):
        a_items = {Item("A", l0, y, 0, zero_vec) for y in a.clocks}
        words.append(RegionWord(frozenset(a_items | b_items), (), frozenset(), cmax))
    return words


def representative(w: RegionWord, dimension: int | None = None) -> JointConfiguration:
    """A concrete joint configuration whose encoding is ``w``.

    Fractional block ``i`` of ``r`` blocks gets fractional part ``i/(r+1)``,
    top items get ``cmax + 1``.
    """
    n = len(w.frac)
    values = []
    for it, idx, pos in w.positioned():
        if pos == ZERO:
            v = Fraction(int(it.reg))
        elif pos == FRAC:
            v = int(it.reg) + Fraction(idx, n + 1)
        else:
            v = Fraction(w.cmax + 1)
        values.append((it, v))
    a_vals = sorted((it.clock, v) for it, v in values if it.owner == "A")
    a_state = ConcreteState(w.a_location, tuple(a_vals), ())
    b_states = {
        ConcreteState(it.location, ((it.clock, v),), tuple(it.counters))
        for it, v in values
        if it.owner == "B"
    }
    if dimension is None:
        dimension = len(next(iter(w.items())).counters)
    return JointConfiguration(a_state, frozenset(b_states), dimension)


def joint_moves(c: JointConfiguration, delay, letter: str, a: Automaton, b: Automaton) -> list:
    """Concrete joint steps: ``(A-edge index, successor configuration)`` pairs."""
    elapsed = {clock: v + delay for clock, v in c.a_state.valuation}
    b_next = set()
    for s in c.b_states:
        b_next |= step(b, s, delay, letter)
    moves = []
    for edge_index, e in enumerate(a.edges):
        if e.source != c.a_state.location or e.letter != letter:
            continue
        if not guard_holds(e.guard, elapsed):
            continue
        val = tuple((clock, Fraction(0) if clock in e.resets else v) for clock, v in sorted(elapsed.items()))
        moves.append((edge_index, JointConfiguration(ConcreteState(e.target, val, ()), frozenset(b_next), c.dimension)))
    return moves


_ITEM = re.compile(r"([AB]):(.+?)\.([^.@,{}|]+)@(\d+|T)\[([0-9,\s]*)\]")


def _parse_block(text: str, where: int) -> set:
    items = set()
    pos = 0
    text_stripped = text.strip()
    if not text_stripped:
        return items
    while pos < len(text):
        while pos < len(text) and text[pos] in " ,":
            pos += 1
        if pos >= len(text):
            break
        m = _ITEM.match(text, pos)
        if not m:
            raise RegionParseError(f"bad item at column {where + pos + 1}: {text[pos:]!r}")
        owner, loc, clock, reg, ctr = m.groups()
        counters = tuple(int(c) for c in ctr.replace(" ", "").split(",") if c)
        items.add(Item(owner, loc, clock, TOP if reg == "T" else int(reg), counters))
        pos = m.end()
    return items


def parse_region_word(text: str, cmax: int) -> RegionWord:
    """Inverse of :meth:`RegionWord.render`."""
    text = text.strip()
    if "|" not in text:
        raise RegionParseError("missing '|' before the top block")
    head, _, tail = text.rpartition("|")
    blocks = []
    pos = 0
    while pos < len(head):
        if head[pos].isspace():
            pos += 1
            continue
        if head[pos] != "{":
            raise RegionParseError(f"expected '{{' at column {pos + 1}")
        end = head.find("}", pos)
        if end < 0:
            raise RegionParseError(f"unclosed block at column {pos + 1}")
        blocks.append(_parse_block(head[pos + 1:end], pos + 1))
        pos = end + 1
    tail = tail.strip()
    if not (tail.startswith("{") and tail.endswith("}")):
        raise RegionParseError("top block must be written as {...}")
    top = _parse_block(tail[1:-1], len(head) + 2)
    if not blocks:
        raise RegionParseError("missing zero block")
    try:
        return RegionWord(frozenset(blocks[0]), tuple(blocks[1:]), frozenset(top), cmax)
    except ValueError as exc:
        raise RegionParseError(str(exc)) from exc
