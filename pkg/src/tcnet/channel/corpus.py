"""Seeded corpora of timed words for differential tests of the gadget automata.

Each entry is ``(tag, word)`` with tag one of ``valid-ef`` (encoding of an
error-free computation), ``valid-faulty`` (encoding of a computation with
insertion errors), ``mutant`` (one local edit of an encoding) or ``random``.
"""
from __future__ import annotations

import random
from fractions import Fraction

from ..automata import TimedWord
from .encoding import HASH, MINUS, PLUS, STAR, encode_computation, encoding_alphabet
from .machine import ChannelConfig, ChannelMachine, ChannelStep, check_computation, step_exact

__all__ = ["TAGS", "random_computation", "mutate", "random_word", "generate_corpus"]

TAGS = ("valid-ef", "valid-faulty", "mutant", "random")


def random_computation(c: ChannelMachine, rng: random.Random, faulty: bool,
                       max_len: int = 3, max_steps: int = 12, insert_p: float = 0.3):
    """A random walk from ``(s_I, ε)`` that stops on first reaching the final state, or ``None``."""
    cfg = ChannelConfig(c.initial, ())
    steps = []
    msgs = sorted(c.messages)
    for _ in range(max_steps):
        options = c.outgoing(cfg.state)
        rng.shuffle(options)
        moved = False
        for label, target in options:
            nxt = [t for t in step_exact(c, cfg, label) if t.state == target]
            if nxt:
                after = list(nxt[0].channel)
            elif faulty and label.startswith("?"):
                # insertion at the head makes the receive possible
                after = list(cfg.channel)
            else:
                continue
            if faulty:
                while len(after) < max_len and rng.random() < insert_p:
                    after.insert(rng.randrange(len(after) + 1), rng.choice(msgs))
            if len(after) > max_len:
                continue
            new = ChannelConfig(target, tuple(after))
            steps.append(ChannelStep(cfg, label, new))
            cfg = new
            moved = True
            break
        if not moved:
            return None
        if cfg.state == c.final:
            return steps
    return None


def mutate(w: TimedWord, letters, rng: random.Random) -> TimedWord:
    """One local edit: replace, delete, duplicate or swap a letter, or nudge a timestamp."""
    events = list(w.events)
    i = rng.randrange(len(events))
    kind = rng.choice(("replace", "delete", "duplicate", "swap", "nudge", "insert"))
    a, t = events[i]
    if kind == "replace":
        events[i] = (rng.choice(letters), t)
    elif kind == "delete" and len(events) > 1:
        del events[i]
    elif kind == "duplicate":
        events.insert(i, (a, t))
    elif kind == "swap" and i + 1 < len(events):
        events[i], events[i + 1] = (events[i + 1][0], t), (a, events[i + 1][1])
    elif kind == "insert":
        lo = events[i - 1][1] if i else Fraction(0)
        events.insert(i, (rng.choice(letters), (lo + t) / 2))
    else:
        lo = events[i - 1][1] if i else Fraction(0)
        hi = events[i + 1][1] if i + 1 < len(events) else t + 1
        choices = [x for x in (t - Fraction(1, 20), t + Fraction(1, 20), (lo + t) / 2, (t + hi) / 2, lo, hi)
                   if lo <= x <= hi and x != t]
        if choices:
            events[i] = (a, rng.choice(choices))
    return TimedWord(tuple(events))


def random_word(letters, rng: random.Random, max_len: int = 20) -> TimedWord:
    length = rng.randint(1, max_len)
    times = sorted(Fraction(rng.randint(0, 10 * length), rng.choice((1, 2, 5, 10))) for _ in range(length))
    return TimedWord(tuple((rng.choice(letters), t) for t in times))


def _encode(c, steps, rng):
    longest = max(len(cfg.channel) for st in steps for cfg in (st.source, st.target))
    n = longest + rng.choice((0, 0, 1, 2))
    start = rng.choice((Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3)))
    return encode_computation(c, steps, n, start)


def generate_corpus(c: ChannelMachine, size: int = 500, seed: int = 0, attempts: int = 5000) -> list:
    """Deterministic corpus of ``size`` entries for machine ``c``.

    Roughly a fifth encodings, three fifths mutants of those encodings and a
    fifth random words.  Machines without any reachable final state get no
    encodings, and then mutants come from the shape-only skeleton words.
    """
    rng = random.Random(seed)
    letters = sorted(encoding_alphabet(c).letters)
    valid = []
    want = max(1, size // 5)
    for _ in range(attempts):
        if len(valid) >= want:
            break
        faulty = rng.random() < 0.7
        steps = random_computation(c, rng, faulty)
        if steps is None:
            continue
        tag = "valid-ef" if check_computation(c, steps, exact=True) else "valid-faulty"
        valid.append((tag, _encode(c, steps, rng)))
    seeds = [w for _, w in valid] or [_skeleton(c, rng) for _ in range(want)]
    out = list(valid)
    n_random = max(1, size // 5)
    while len(out) < size - n_random:
        w = rng.choice(seeds)
        for _ in range(rng.choice((1, 1, 1, 2))):
            w = mutate(w, letters, rng)
        out.append(("mutant", w))
    while len(out) < size:
        out.append(("random", random_word(letters, rng)))
    return out


def _skeleton(c: ChannelMachine, rng: random.Random) -> TimedWord:
    n = rng.randint(0, 2)
    t = Fraction(1)
    events = [(c.initial, t)] + [(PLUS, t + Fraction(j, n + 1)) for j in range(1, n + 1)]
    events.append(("empty?", t + 1))
    for _ in range(rng.randint(0, 3)):
        t += 2
        events.append((rng.choice(sorted(c.states - {c.final})), t))
        events += [(HASH, t + Fraction(j, n + 1)) for j in range(1, n + 1)]
        events.append((rng.choice(sorted(c.labels)), t + 1))
    t += 2
    events.append((c.final, t))
    events += [(MINUS, t + Fraction(j, n + 1)) for j in range(1, n + 1)]
    events.append((STAR, t + 1))
    return TimedWord(tuple(events))
