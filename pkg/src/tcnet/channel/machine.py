"""Channel machines over a FIFO channel, with exact and insertion-error semantics."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from ..wqo import subword_leq

__all__ = [
    "ChannelError",
    "ChannelMachine",
    "ChannelConfig",
    "ChannelStep",
    "ReachResult",
    "EMPTY_TEST",
    "parse_label",
    "send",
    "receive",
    "step_exact",
    "step_faulty_check",
    "faulty_successors",
    "reachable",
    "check_computation",
]

EMPTY_TEST = "empty?"


class ChannelError(ValueError):
    pass


def send(m: str) -> str:
    return "!" + m


def receive(m: str) -> str:
    return "?" + m


def parse_label(label: str):
    """Split a label into ``(kind, message)`` with kind ``"!"``, ``"?"`` or ``"empty?"``."""
    if label == EMPTY_TEST:
        return EMPTY_TEST, None
    if len(label) > 1 and label[0] in "!?":
        return label[0], label[1:]
    raise ChannelError(f"bad channel label {label!r}")


@dataclass(frozen=True, order=True)
class ChannelConfig:
    state: str
    channel: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "channel", tuple(self.channel))

    def __str__(self) -> str:
        return f"({self.state},{''.join(self.channel) or 'ε'})"


@dataclass(frozen=True)
class ChannelStep:
    source: ChannelConfig
    label: str
    target: ChannelConfig

    def __str__(self) -> str:
        return f"{self.source} -{self.label}-> {self.target}"


@dataclass(frozen=True)
class ChannelMachine:
    """``transitions`` holds ``(source, label, target)`` triples; ``final`` is the target state."""

    states: frozenset
    initial: str
    messages: frozenset
    transitions: frozenset
    final: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "messages", frozenset(self.messages))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if self.initial not in self.states:
            raise ChannelError(f"initial state {self.initial!r} is not a state")
        if self.final is not None and self.final not in self.states:
            raise ChannelError(f"final state {self.final!r} is not a state")
        if self.states & self.messages:
            raise ChannelError(f"names used both as state and message: {sorted(self.states & self.messages)}")
        for s, label, t in self.transitions:
            if s not in self.states or t not in self.states:
                raise ChannelError(f"transition ({s}, {label}, {t}) uses an unknown state")
            kind, m = parse_label(label)
            if m is not None and m not in self.messages:
                raise ChannelError(f"transition ({s}, {label}, {t}) uses unknown message {m!r}")
            if t == self.initial:
                raise ChannelError(f"transition ({s}, {label}, {t}) enters the initial state")
            if s == self.initial and kind != EMPTY_TEST:
                raise ChannelError(f"transition ({s}, {label}, {t}) leaves the initial state without empty?")

    @property
    def labels(self) -> frozenset:
        return frozenset({EMPTY_TEST} | {send(m) for m in self.messages} | {receive(m) for m in self.messages})

    def targets(self, state: str, label: str) -> list:
        return sorted(t for s, l, t in self.transitions if s == state and l == label)

    def outgoing(self, state: str) -> list:
        return sorted((l, t) for s, l, t in self.transitions if s == state)


def step_exact(c: ChannelMachine, cfg: ChannelConfig, label: str) -> set:
    kind, m = parse_label(label)
    x = cfg.channel
    if kind == "!":
        after = x + (m,)
    elif kind == "?":
        if not x or x[0] != m:
            return set()
        after = x[1:]
    else:
        if x:
            return set()
        after = x
    return {ChannelConfig(t, after) for t in c.targets(cfg.state, label)}


def step_faulty_check(c: ChannelMachine, cfg1: ChannelConfig, label: str, cfg2: ChannelConfig) -> bool:
    """Is ``cfg1 -label-> cfg2`` a step of the insertion-error semantics?

    Uses the one-step characterisation: ``x1·m ≤ x2`` for sends, ``x1 ≤ m·x2``
    for receives and ``x1 = ε`` for emptiness tests.
    """
    if cfg2.state not in c.targets(cfg1.state, label):
        return False
    kind, m = parse_label(label)
    x1, x2 = cfg1.channel, cfg2.channel
    if kind == "!":
        return subword_leq(x1 + (m,), x2)
    if kind == "?":
        return subword_leq(x1, (m,) + x2)
    return not x1


def _words_up_to(messages, length: int):
    alphabet = sorted(messages)
    for n in range(length + 1):
        yield from itertools.product(alphabet, repeat=n)


def faulty_successors(c: ChannelMachine, cfg: ChannelConfig, max_len: int) -> list:
    """All insertion-error successors of ``cfg`` whose channel has at most ``max_len`` symbols."""
    out = []
    words = list(_words_up_to(c.messages, max_len))
    for label, target in c.outgoing(cfg.state):
        for x2 in words:
            nxt = ChannelConfig(target, x2)
            if step_faulty_check(c, cfg, label, nxt):
                out.append(ChannelStep(cfg, label, nxt))
    return out


def _exact_successors(c: ChannelMachine, cfg: ChannelConfig, max_len: int) -> list:
    out = []
    for label, _ in dict.fromkeys(c.outgoing(cfg.state)):
        for nxt in sorted(step_exact(c, cfg, label)):
            if len(nxt.channel) <= max_len:
                out.append(ChannelStep(cfg, label, nxt))
    return out


@dataclass(frozen=True)
class ReachResult:
    found: bool
    computation: tuple = ()
    exhausted_bounds: bool = False  # True when the search hit a length or depth bound

    @property
    def within_bounds_only(self) -> bool:
        return not self.found and self.exhausted_bounds


def reachable(
    c: ChannelMachine,
    target: str,
    mode: str = "exact",
    max_len: int = 5,
    max_depth: int = 50,
) -> ReachResult:
    """Breadth-first search from ``(s_I, ε)`` for a configuration in state ``target``."""
    if mode not in ("exact", "faulty"):
        raise ChannelError(f"mode must be 'exact' or 'faulty', not {mode!r}")
    if max_len < 0 or max_depth < 0:
        raise ChannelError("bounds must be nonnegative")
    start = ChannelConfig(c.initial, ())
    if start.state == target:
        return ReachResult(True, ())
    parent = {start: None}
    frontier = deque([(start, 0)])
    hit_bound = False
    expand = faulty_successors if mode == "faulty" else _exact_successors
    while frontier:
        cfg, depth = frontier.popleft()
        if depth == max_depth:
            hit_bound = True
            continue
        for st in expand(c, cfg, max_len):
            nxt = st.target
            if nxt in parent:
                continue
            parent[nxt] = st
            if nxt.state == target:
                path = []
                while parent[nxt] is not None:
                    path.append(parent[nxt])
                    nxt = parent[nxt].source
                return ReachResult(True, tuple(reversed(path)))
            frontier.append((nxt, depth + 1))
        if mode == "exact":
            hit_bound = hit_bound or any(
                len(t.channel) > max_len
                for label, _ in c.outgoing(cfg.state)
                for t in step_exact(c, cfg, label)
            )
        else:
            hit_bound = True  # insertions are always cut off by the length bound
    return ReachResult(False, (), hit_bound)


def check_computation(c: ChannelMachine, steps, exact: bool = False) -> bool:
    """True if ``steps`` chain up and each one is a step of the chosen semantics."""
    prev = None
    for st in steps:
        if prev is not None and st.source != prev:
            return False
        if exact:
            if st.target not in step_exact(c, st.source, st.label):
                return False
        elif not step_faulty_check(c, st.source, st.label, st.target):
            return False
        prev = st.target
    return True
