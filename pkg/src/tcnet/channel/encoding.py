"""Timed-word encodings of channel-machine computations.

A configuration ``(s, x)`` is written as the state letter at some time ``t``
followed by the channel contents inside ``(t, t+1)``; the transition label
sits at ``t+1`` and the next configuration starts at ``t+2``.  Channels are
padded with ``#`` to a fixed length ``n``.  The first configuration uses
``n`` copies of ``+`` and the last one writes every content symbol as ``-``,
closed by ``*`` one time unit after the final state.

:func:`check_conditions` is the reference membership test for the encoding
language; the gadget automata in :mod:`tcnet.channel.gadgets` are tested
against it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..automata import TimedWord, VisiblyAlphabet, WordError
from ..wqo import subword_leq
from .machine import (
    EMPTY_TEST,
    ChannelConfig,
    ChannelError,
    ChannelMachine,
    parse_label,
    step_faulty_check,
)

__all__ = [
    "PLUS",
    "MINUS",
    "HASH",
    "STAR",
    "encoding_alphabet",
    "Report",
    "check_conditions",
    "infer_n",
    "member_LC",
    "member_Lef",
    "classify",
    "encode_computation",
    "encode_fragment",
]

PLUS, MINUS, HASH, STAR = "+", "-", "#", "*"
FRESH = (PLUS, MINUS, HASH, STAR)


def _require_final(c: ChannelMachine) -> str:
    if c.final is None:
        raise ChannelError("the channel machine needs a final state for encodings")
    if c.final == c.initial:
        raise ChannelError("the final state must differ from the initial state")
    return c.final


def encoding_alphabet(c: ChannelMachine) -> VisiblyAlphabet:
    used = set(c.states) | set(c.messages) | set(c.labels)
    clash = used & set(FRESH)
    if clash:
        raise ChannelError(f"machine uses reserved symbols {sorted(clash)}")
    if set(c.labels) & (set(c.states) | set(c.messages)):
        raise ChannelError("labels must not coincide with state or message names")
    internal = (set(c.states) - {c.initial}) | set(c.messages) | set(c.labels) | {HASH}
    return VisiblyAlphabet(internal=frozenset(internal), call=frozenset({c.initial, PLUS}),
                           ret=frozenset({MINUS, STAR}))


@dataclass(frozen=True)
class Report:
    """Violated condition identifiers, in a fixed order."""

    violations: tuple

    def __bool__(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def __contains__(self, item) -> bool:
        return item in self.violations


ORDER = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "7'", "8'", "9'", "10")


def _classify(c: ChannelMachine, letter: str) -> str:
    if letter == c.initial:
        return "I"
    if letter == c.final:
        return "F"
    if letter in c.states:
        return "S"
    if letter in c.messages:
        return "M"
    if letter == EMPTY_TEST:
        return "E"
    if letter in c.labels:
        return "L"
    return {PLUS: "+", MINUS: "-", HASH: "#", STAR: "*"}[letter]


@dataclass
class _Block:
    state: str
    time: Fraction
    contents: list  # (letter, time)
    label: str
    label_time: Fraction


def _parse_blocks(events, c: ChannelMachine, n: int):
    """Blocks of a word whose untiming matches the shape expression, else ``None``."""
    classes = "".join(_classify(c, a) for a, _ in events)
    shape = rf"I\+{{{n}}}E(?:[ISF]M*#*[LE])*F-*\*"
    if not re.fullmatch(shape, classes):
        return None
    blocks, i = [], 0
    while i < len(events):
        state, t = events[i]
        j = i + 1
        while j < len(events) and classes[j] in "+M#-":
            j += 1
        blocks.append(_Block(state, t, list(events[i + 1:j]), events[j][0], events[j][1]))
        i = j + 1
    return blocks


def _first_after(events, i: int, pred):
    for j in range(i + 1, len(events)):
        if pred(events[j][0]):
            return events[j][1]
    return None


def _pair_violations(cur: _Block, nxt: _Block, primed: bool) -> bool:
    """Whether the matching-copy condition for this transition fails."""
    d = cur.time
    times = [t for _, t in cur.contents]
    ntimes = [t for _, t in nxt.contents]
    # the infix only exists with exact label and state timing and contents inside their unit intervals
    if cur.label_time != d + 1 or nxt.time != d + 2 or nxt.label_time != d + 3:
        return False
    chain = [d] + times + [d + 1, d + 2] + ntimes + [d + 3]
    if any(a >= b for a, b in zip(chain, chain[1:])):
        return False
    at = {t: sym for sym, t in nxt.contents}

    def copy(expected: str) -> str:
        return MINUS if primed else expected

    kind, m = parse_label(cur.label)
    syms = [s for s, _ in cur.contents]
    if kind == EMPTY_TEST:
        if any(s not in (PLUS, HASH) for s in syms):
            return True
        return any(at.get(t + 2) != copy(HASH) for t in times)
    if kind == "!":
        if HASH not in syms:
            return True
        j = syms.index(HASH)
        for i, (s, t) in enumerate(cur.contents):
            want = copy(m) if i == j else copy(s)
            if at.get(t + 2) != want:
                return True
        return False
    # receive
    if not syms or syms[0] != m:
        return True
    for s, t in cur.contents[1:]:
        if at.get(t + 2) != copy(s):
            return True
    last_sym, last_time = nxt.contents[-1] if nxt.contents else (None, None)
    return not (last_sym == copy(HASH) and last_time > times[-1] + 2)


def check_conditions(w: TimedWord, c: ChannelMachine, n: int) -> Report:
    """Report every violated condition of the encoding language for channel length ``n``."""
    final = _require_final(c)
    alphabet = encoding_alphabet(c)
    for a, _ in w:
        if a not in alphabet:
            raise WordError(f"letter {a!r} is not in the encoding alphabet")
    events = list(w.events)
    bad = set()
    if not w.is_strictly_monotonic():
        bad.add("1")
    blocks = _parse_blocks(events, c, n)
    if blocks is None:
        bad.add("2")
    states, labels = c.states, c.labels
    for i, (a, t) in enumerate(events):
        if a not in states:
            continue
        if a == final:
            if _first_after(events, i, lambda x: x == STAR) != t + 1:
                bad.add("6")
            continue
        for j in range(i + 1, len(events)):
            lj, tj = events[j]
            if tj > t + 1:
                break
            if tj != t + 1 or lj not in labels:
                continue
            for k in range(j + 1, len(events)):
                sk, tk = events[k]
                if tk > t + 2:
                    break
                if tk == t + 2 and sk in states and (a, lj, sk) not in c.transitions:
                    bad.add("3")
        if _first_after(events, i, lambda x: x in labels) != t + 1:
            bad.add("4")
        if _first_after(events, i, lambda x: x in states) != t + 2:
            bad.add("5")
    if blocks is not None:
        for cur, nxt in zip(blocks, blocks[1:]):
            if cur.state == final:
                continue
            last = nxt.label == STAR
            if nxt.state == final and not last:
                continue
            if _pair_violations(cur, nxt, last):
                kind, _ = parse_label(cur.label)
                cid = {EMPTY_TEST: "7", "!": "8", "?": "9"}[kind]
                bad.add(cid + "'" if last else cid)
    return Report(tuple(x for x in ORDER if x in bad))


def infer_n(w: TimedWord, c: ChannelMachine) -> int:
    """Length of the ``+`` run right after the leading initial-state letter."""
    letters = w.letters
    if not letters or letters[0] != c.initial:
        return 0
    n = 0
    for a in letters[1:]:
        if a != PLUS:
            break
        n += 1
    return n


def member_LC(w: TimedWord, c: ChannelMachine) -> bool:
    return check_conditions(w, c, infer_n(w, c)).ok


def member_Lef(w: TimedWord, c: ChannelMachine) -> bool:
    """Membership in the error-free encoding language (condition 10 on top)."""
    return not classify(w, c).violations


def classify(w: TimedWord, c: ChannelMachine, n: int | None = None) -> Report:
    """Violated conditions including condition 10, for ``n`` (inferred when omitted)."""
    if n is None:
        n = infer_n(w, c)
    report = check_conditions(w, c, n)
    if w.letters.count(MINUS) != n:
        return Report(report.violations + ("10",))
    return report


def _spread(lo: Fraction, hi: Fraction, count: int) -> list:
    return [lo + (hi - lo) * Fraction(j, count + 1) for j in range(1, count + 1)]


def _with_insertions(matched: list, target: tuple, lo: Fraction, hi: Fraction, messages) -> list:
    """Insert the symbols of ``target`` missing from the matched message copies.

    ``matched`` lists ``(symbol, time)`` pairs: messages first, wildcards after.
    Inserted messages go between matched messages (or before the first
    wildcard) at evenly spread times.
    """
    msgs = [(s, t) for s, t in matched if s in messages]
    rest = [(s, t) for s, t in matched if s not in messages]
    if not subword_leq(tuple(s for s, _ in msgs), target):
        raise ChannelError("computation step is inconsistent with the channel contents")
    # leftmost embedding of the matched messages into target
    slots, k = [], 0
    for sym in target:
        if k < len(msgs) and msgs[k][0] == sym:
            slots.append(k)
            k += 1
        else:
            slots.append(None)
    out, pending = [], []
    prev = lo
    for pos, sym in enumerate(target):
        if slots[pos] is None:
            pending.append(sym)
            continue
        t = msgs[slots[pos]][1]
        out += list(zip(pending, _spread(prev, t, len(pending))))
        out.append((sym, t))
        pending, prev = [], t
    upper = rest[0][1] if rest else hi
    out += list(zip(pending, _spread(prev, upper, len(pending))))
    return out + rest


def _encode_blocks(c: ChannelMachine, steps, first_contents: list, start: Fraction) -> list:
    """Blocks ``[state, time, contents, label]`` for a chained computation."""
    first_state = steps[0].source.state
    blocks = [[first_state, start, first_contents, None]]
    for st in steps:
        if not step_faulty_check(c, st.source, st.label, st.target):
            raise ChannelError(f"not a step of the machine: {st}")
        cur = blocks[-1]
        cur[3] = st.label
        base = cur[1]
        kind, m = parse_label(st.label)
        contents = cur[2]
        x1 = st.source.channel
        if kind == EMPTY_TEST:
            matched = [(HASH, t + 2) for _, t in contents]
        elif kind == "!":
            syms = [s for s, _ in contents]
            if HASH not in syms:
                raise ChannelError("n too small: no wildcard left for a send")
            j = syms.index(HASH)
            matched = [((m if i == j else s), t + 2) for i, (s, t) in enumerate(contents)]
        else:
            if not (x1 and x1[0] == m and subword_leq(x1[1:], st.target.channel)):
                # the read message was inserted in front of the channel
                first = contents[0][1] if contents else base + 1
                contents.insert(0, (m, (base + first) / 2))
            last = contents[-1][1]
            matched = [(s, t + 2) for s, t in contents[1:]]
            matched.append((HASH, (last + 2 + base + 3) / 2))
        nxt = _with_insertions(matched, st.target.channel, base + 2, base + 3, c.messages)
        blocks.append([st.target.state, base + 2, nxt, None])
    return blocks


def _validate_chain(steps):
    for a, b in zip(steps, steps[1:]):
        if a.target != b.source:
            raise ChannelError(f"computation does not chain: {a.target} then {b.source}")


def encode_computation(c: ChannelMachine, steps, n: int | None = None, start=1) -> TimedWord:
    """Encode a computation from ``(s_I, ε)`` to the final state as a timed word.

    ``n`` defaults to the longest channel in the computation.
    """
    final = _require_final(c)
    steps = list(steps)
    if not steps:
        raise ChannelError("an encoding needs at least one step (the initial emptiness test)")
    _validate_chain(steps)
    if steps[0].source != ChannelConfig(c.initial, ()):
        raise ChannelError("computation must start in the initial state with an empty channel")
    if steps[-1].target.state != final:
        raise ChannelError("computation must end in the final state")
    if any(st.target.state == final for st in steps[:-1]):
        raise ChannelError("the final state may only be visited at the end")
    longest = max(len(cfg.channel) for st in steps for cfg in (st.source, st.target))
    if n is None:
        n = longest
    if n < longest:
        raise ChannelError(f"n={n} is smaller than the longest channel ({longest})")
    start = Fraction(start)
    first = [(PLUS, start + Fraction(j, n + 1)) for j in range(1, n + 1)]
    blocks = _encode_blocks(c, steps, first, start)
    blocks[-1][2] = [(MINUS, t) for _, t in blocks[-1][2]]
    blocks[-1][3] = STAR
    return _flatten(blocks)


def encode_fragment(c: ChannelMachine, steps, n: int, start=0) -> TimedWord:
    """Encode a computation from an arbitrary configuration, padding channels to ``n``.

    The result covers every configuration and the labels between them; it is
    not closed by a final block.
    """
    steps = list(steps)
    if not steps:
        raise ChannelError("empty computation")
    _validate_chain(steps)
    x0 = steps[0].source.channel
    if n < len(x0):
        raise ChannelError("n smaller than the initial channel")
    start = Fraction(start)
    pad = list(x0) + [HASH] * (n - len(x0))
    first = [(s, start + Fraction(j, n + 1)) for j, s in enumerate(pad, start=1)]
    blocks = _encode_blocks(c, steps, first, start)
    return _flatten(blocks)


def _flatten(blocks) -> TimedWord:
    events = []
    for state, t, contents, label in blocks:
        events.append((state, t))
        events += contents
        if label is not None:
            events.append((label, t + 1))
    return TimedWord(tuple(events))
