"""Metric temporal logic over finite timed words, pointwise semantics.

Grammar (loosest binding first)::

    formula := impl
    impl    := or ('->' impl)?
    or      := and ('|' and)*
    and     := until ('&' until)*
    until   := unary (('U' interval?) until)?
    unary   := '!' unary | ('F' | 'G') interval? unary | atom | '(' formula ')'
    atom    := 'true' | 'false' | identifier | "quoted"

Intervals are written ``[l,u]``, ``(l,u)`` or mixed, with ``inf`` as an open
upper end.  Omitted intervals mean ``[0,inf)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .automata import TimedWord

__all__ = [
    "MtlError",
    "MtlParseError",
    "Interval",
    "Formula",
    "TrueF",
    "Atom",
    "Not",
    "And",
    "Until",
    "TRUE",
    "FALSE",
    "Or",
    "Implies",
    "Eventually",
    "Always",
    "eval_at",
    "models",
    "parse_mtl",
    "to_text",
]


class MtlError(ValueError):
    pass


class MtlParseError(MtlError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Interval:
    lo: int = 0
    hi: int | None = None  # None stands for infinity
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo < 0:
            raise MtlError("interval bounds must be natural numbers")
        if self.hi is None:
            if self.hi_closed:
                raise MtlError("an infinite upper end must be open")
        elif self.hi < self.lo or (self.hi == self.lo and not (self.lo_closed and self.hi_closed)):
            raise MtlError(f"empty interval {self}")

    def __contains__(self, d) -> bool:
        if d < self.lo or (d == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return d < self.hi or (d == self.hi and self.hi_closed)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"


UNBOUNDED = Interval()


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    letter: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    interval: Interval
    right: Formula


TRUE = TrueF()
FALSE = Not(TRUE)


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Eventually(interval: Interval, sub: Formula) -> Formula:
    return Until(TRUE, interval, sub)


def Always(interval: Interval, sub: Formula) -> Formula:
    return Not(Until(TRUE, interval, Not(sub)))


def eval_at(w: TimedWord, i: int, phi: Formula) -> bool:
    """Truth of ``phi`` at 1-based position ``i`` of ``w``."""
    n = len(w)
    if not 1 <= i <= n:
        raise MtlError(f"position {i} out of range 1..{n}")
    return _eval(w.events, i - 1, phi, {})


def _eval(events, i: int, phi: Formula, memo: dict) -> bool:
    key = (i, phi)
    if key in memo:
        return memo[key]
    if isinstance(phi, TrueF):
        result = True
    elif isinstance(phi, Atom):
        result = events[i][0] == phi.letter
    elif isinstance(phi, Not):
        result = not _eval(events, i, phi.sub, memo)
    elif isinstance(phi, And):
        result = _eval(events, i, phi.left, memo) and _eval(events, i, phi.right, memo)
    elif isinstance(phi, Until):
        result = False
        t_i = events[i][1]
        for j in range(i + 1, len(events)):
            if events[j][1] - t_i in phi.interval and _eval(events, j, phi.right, memo):
                result = True
                break
            if not _eval(events, j, phi.left, memo):
                break
    else:
        raise MtlError(f"not a formula: {phi!r}")
    memo[key] = result
    return result


def models(w: TimedWord, phi: Formula) -> bool:
    return eval_at(w, 1, phi)


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<num>\d+)
      | (?P<arrow>->)
      | (?P<sym>[!&|()\[\],])
      | (?P<quoted>"[^"]*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_'?.]*)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MtlParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "quoted":
            tokens.append(("ident", value[1:-1], start))
        elif kind == "ident" and value in ("U", "F", "G", "true", "false", "inf"):
            tokens.append((value, value, start))
        else:
            tokens.append((kind if kind != "sym" else value, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise MtlParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.peek()[0] == "U":
            self.take()
            interval = self.interval()
            return Until(left, interval, self.until())
        return left

    def interval(self) -> Interval:
        if self.peek()[0] not in ("[", "(") or self.tokens[self.i + 1][0] != "num":
            return UNBOUNDED
        open_tok = self.take()
        lo = int(self.take("num")[1])
        self.take(",")
        tok = self.peek()
        if tok[0] == "inf":
            self.take()
            hi = None
        else:
            hi = int(self.take("num")[1])
        close = self.peek()
        if close[0] not in ("]", ")"):
            raise MtlParseError("expected ']' or ')'", close[2])
        self.take()
        try:
            return Interval(lo, hi, open_tok[0] == "[", close[0] == "]")
        except MtlError as exc:
            raise MtlParseError(str(exc), open_tok[2]) from exc

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind in ("F", "G"):
            self.take()
            interval = self.interval()
            sub = self.unary()
            return Eventually(interval, sub) if kind == "F" else Always(interval, sub)
        if kind == "true":
            self.take()
            return TRUE
        if kind == "false":
            self.take()
            return FALSE
        if kind == "ident":
            self.take()
            return Atom(value)
        if kind == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        raise MtlParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse_mtl(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise MtlParseError(f"unexpected trailing {tok[1]!r}", tok[2])
    return phi


_PLAIN_ATOM = re.compile(r"[A-Za-z_][A-Za-z0-9_'?.]*\Z")


def _atom_text(letter: str) -> str:
    if _PLAIN_ATOM.match(letter) and letter not in ("U", "F", "G", "true", "false", "inf"):
        return letter
    return f'"{letter}"'


def to_text(phi: Formula) -> str:
    """Canonical, fully parenthesised core syntax; re-parses to an equal formula."""
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, Atom):
        return _atom_text(phi.letter)
    if isinstance(phi, Not):
        return "!" + to_text(phi.sub)
    if isinstance(phi, And):
        return f"({to_text(phi.left)} & {to_text(phi.right)})"
    if isinstance(phi, Until):
        return f"({to_text(phi.left)} U{phi.interval} {to_text(phi.right)})"
    raise MtlError(f"not a formula: {phi!r}")
