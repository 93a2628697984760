"""Text formats for automata, timed words, channel machines, verdicts and corpora.

Documents are YAML.  Loading goes through the composed node tree so that
every error carries the line and column of the offending node, and so that
timestamps are read from their source text (``"1.2"`` or ``"3/5"``) into exact
fractions rather than through floats.
"""
from __future__ import annotations

import json
from fractions import Fraction

import yaml

from .automata import (
    EMPTY,
    NOOP,
    Atom,
    Automaton,
    AutomatonError,
    Edge,
    StackOp,
    StoreSpec,
    TimedWord,
    VisiblyAlphabet,
    WordError,
    validate,
)
from .channel.machine import ChannelConfig, ChannelError, ChannelMachine, ChannelStep
from .inclusion import TraceStep, Verdict
from .regionwords import RegionParseError, parse_region_word

__all__ = [
    "FormatError",
    "format_time",
    "parse_time",
    "load_automaton",
    "dump_automaton",
    "load_word",
    "dump_word",
    "load_machine",
    "dump_machine",
    "load_computation",
    "dump_computation",
    "load_verdict",
    "dump_verdict",
    "dump_corpus",
    "load_corpus",
    "KINDS",
]

KINDS = ("ta", "tpda", "tocn", "tcn", "vtpda", "vtocn", "vtcn")


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line, self.column = line, column


def _fail(node, message: str):
    mark = getattr(node, "start_mark", None)
    if mark is None:
        raise FormatError(message)
    raise FormatError(message, mark.line + 1, mark.column + 1)


def _compose(text: str):
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise FormatError(f"malformed document: {exc.problem}", mark.line + 1, mark.column + 1) from exc
        raise FormatError(f"malformed document: {exc}") from exc
    if node is None:
        raise FormatError("empty document")
    return node


def _mapping(node, required=(), optional=()) -> dict:
    if not isinstance(node, yaml.MappingNode):
        _fail(node, "expected a mapping")
    out = {}
    for k, v in node.value:
        key = _scalar(k)
        if key in out:
            _fail(k, f"duplicate key {key!r}")
        if key not in required and key not in optional:
            _fail(k, f"unknown key {key!r}")
        out[key] = v
    for key in required:
        if key not in out:
            _fail(node, f"missing key {key!r}")
    return out


def _seq(node) -> list:
    if not isinstance(node, yaml.SequenceNode):
        _fail(node, "expected a list")
    return list(node.value)


def _scalar(node) -> str:
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, "expected a single value")
    return node.value


def _names(node) -> list:
    return [_scalar(n) for n in _seq(node)]


def _nat(node) -> int:
    text = _scalar(node)
    if not text.isdigit():
        _fail(node, f"expected a natural number, got {text!r}")
    return int(text)


def parse_time(text: str) -> Fraction:
    """Exact value of ``"7"``, ``"1.25"`` or ``"3/4"``."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact time value: {text!r}") from exc
    if value < 0:
        raise ValueError(f"negative time value: {text!r}")
    return value


def format_time(value: Fraction) -> str:
    return str(Fraction(value))


def _time(node) -> Fraction:
    try:
        return parse_time(_scalar(node))
    except ValueError as exc:
        _fail(node, str(exc))


def _dump(doc) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, allow_unicode=True, width=100)


# timed words

def _word_from(node) -> TimedWord:
    events = []
    for ev in _seq(node):
        parts = _seq(ev)
        if len(parts) != 2:
            _fail(ev, "an event is [letter, timestamp]")
        events.append((_scalar(parts[0]), _time(parts[1])))
    try:
        return TimedWord(tuple(events))
    except WordError as exc:
        _fail(node, str(exc))


def load_word(text: str) -> TimedWord:
    return _word_from(_compose(text))


def _word_doc(w: TimedWord) -> list:
    return [[a, format_time(t)] for a, t in w]


def dump_word(w: TimedWord) -> str:
    return json.dumps(_word_doc(w)) + "\n"


# automata

_OP_WORDS = {"noop": NOOP, "empty?": EMPTY}


def _op_from(node, store: StoreSpec):
    if isinstance(node, yaml.SequenceNode):
        if store.kind != "counters":
            _fail(node, "counter vectors are only allowed with kind tcn/vtcn")
        vector = []
        for n in _seq(node):
            text = _scalar(n)
            if text not in ("-1", "0", "1", "+1"):
                _fail(n, f"counter updates must be -1, 0 or 1, got {text!r}")
            vector.append(int(text))
        return tuple(vector)
    text = _scalar(node).strip()
    if text in _OP_WORDS:
        return _OP_WORDS[text] if store.kind != "counters" or text != "noop" else (0,) * store.dimension
    for kind in ("push", "pop"):
        if text == kind:
            return StackOp(kind, "1")
        if text.startswith(kind + "(") and text.endswith(")"):
            return StackOp(kind, text[len(kind) + 1:-1].strip())
    _fail(node, f"unknown store operation {text!r}")


def _guard_from(node) -> tuple:
    atoms = []
    for a in _seq(node):
        parts = _seq(a)
        if len(parts) != 3:
            _fail(a, "a guard atom is [clock, relation, natural]")
        try:
            atoms.append(Atom(_scalar(parts[0]), _scalar(parts[1]), _nat(parts[2])))
        except (ValueError, AutomatonError) as exc:
            _fail(a, str(exc))
    return tuple(atoms)


def _store_from(kind: str, doc: dict) -> StoreSpec:
    base = kind[1:] if kind.startswith("v") else kind
    if base == "ta":
        return StoreSpec.none()
    if base == "tocn":
        return StoreSpec.one_counter()
    if base == "tpda":
        if "stack_alphabet" not in doc:
            raise FormatError("kind tpda needs stack_alphabet")
        return StoreSpec.stack(frozenset(_names(doc["stack_alphabet"])))
    if "dimension" not in doc:
        raise FormatError("kind tcn needs dimension")
    return StoreSpec.counters(_nat(doc["dimension"]))


def load_automaton(text: str) -> Automaton:
    root = _compose(text)
    doc = _mapping(root, ("kind", "alphabet", "locations", "initial", "accepting", "edges"),
                   ("clocks", "stack_alphabet", "dimension"))
    kind = _scalar(doc["kind"])
    if kind not in KINDS:
        _fail(doc["kind"], f"kind must be one of {', '.join(KINDS)}")
    alpha = _mapping(doc["alphabet"], (), ("int", "call", "ret"))
    try:
        alphabet = VisiblyAlphabet(
            internal=frozenset(_names(alpha["int"])) if "int" in alpha else frozenset(),
            call=frozenset(_names(alpha["call"])) if "call" in alpha else frozenset(),
            ret=frozenset(_names(alpha["ret"])) if "ret" in alpha else frozenset(),
        )
    except ValueError as exc:
        _fail(doc["alphabet"], str(exc))
    try:
        store = _store_from(kind, doc)
    except (FormatError, ValueError) as exc:
        _fail(root, str(exc))
    edges = []
    for en in _seq(doc["edges"]):
        e = _mapping(en, ("from", "letter", "to"), ("guard", "op", "reset"))
        default_op = (0,) * store.dimension if store.kind == "counters" else NOOP
        op = _op_from(e["op"], store) if "op" in e else default_op
        guard = _guard_from(e["guard"]) if "guard" in e else ()
        resets = frozenset(_names(e["reset"])) if "reset" in e else frozenset()
        edges.append(Edge(_scalar(e["from"]), _scalar(e["letter"]), guard, op, resets, _scalar(e["to"])))
    try:
        aut = Automaton(
            alphabet=alphabet,
            store=store,
            locations=frozenset(_names(doc["locations"])),
            initial=frozenset(_names(doc["initial"])),
            accepting=frozenset(_names(doc["accepting"])),
            clocks=tuple(_names(doc["clocks"])) if "clocks" in doc else (),
            edges=tuple(edges),
        )
    except AutomatonError as exc:
        msg = str(exc)
        if msg.startswith("edge "):
            index = int(msg.split()[1])
            _fail(_seq(doc["edges"])[index], msg)
        _fail(root, msg)
    if kind.startswith("v"):
        report = validate(aut)
        if not report.is_visibly:
            _fail(doc["kind"], "automaton is not visibly: " + "; ".join(report.reasons))
    return aut


def _kind_of(aut: Automaton) -> str:
    store = aut.store
    if store.kind == "none":
        return "ta"
    base = {"counters": "tcn"}.get(store.kind) or ("tocn" if aut.is_one_counter_stack
                                                   and store.stack_alphabet == frozenset({"1"}) else "tpda")
    return ("v" + base) if validate(aut).is_visibly else base


def _op_doc(op):
    if isinstance(op, tuple):
        return list(op)
    if op.kind in ("push", "pop"):
        return f"{op.kind}({op.symbol})"
    return op.kind


def automaton_doc(aut: Automaton) -> dict:
    kind = _kind_of(aut)
    doc = {
        "kind": kind,
        "alphabet": {
            "int": sorted(aut.alphabet.internal),
            "call": sorted(aut.alphabet.call),
            "ret": sorted(aut.alphabet.ret),
        },
        "clocks": list(aut.clocks),
    }
    if kind.endswith("tpda"):
        doc["stack_alphabet"] = sorted(aut.store.stack_alphabet)
    if kind.endswith("tcn"):
        doc["dimension"] = aut.store.dimension
    doc["locations"] = sorted(aut.locations)
    doc["initial"] = sorted(aut.initial)
    doc["accepting"] = sorted(aut.accepting)
    doc["edges"] = [
        {
            "from": e.source,
            "letter": e.letter,
            "guard": [[a.clock, a.rel, a.bound] for a in e.guard],
            "op": _op_doc(e.op),
            "reset": sorted(e.resets),
            "to": e.target,
        }
        for e in aut.edges
    ]
    return doc


def dump_automaton(aut: Automaton) -> str:
    return _dump(automaton_doc(aut))


# channel machines

def load_machine(text: str) -> ChannelMachine:
    root = _compose(text)
    doc = _mapping(root, ("states", "initial", "messages", "transitions"), ("final",))
    transitions = []
    for tn in _seq(doc["transitions"]):
        parts = _seq(tn)
        if len(parts) != 3:
            _fail(tn, "a transition is [state, label, state]")
        transitions.append(tuple(_scalar(p) for p in parts))
    try:
        return ChannelMachine(
            states=frozenset(_names(doc["states"])),
            initial=_scalar(doc["initial"]),
            messages=frozenset(_names(doc["messages"])),
            transitions=frozenset(transitions),
            final=_scalar(doc["final"]) if "final" in doc else None,
        )
    except ChannelError as exc:
        _fail(root, str(exc))


def dump_machine(c: ChannelMachine) -> str:
    doc = {
        "states": sorted(c.states),
        "initial": c.initial,
        "messages": sorted(c.messages),
        "transitions": [list(t) for t in sorted(c.transitions)],
    }
    if c.final is not None:
        doc["final"] = c.final
    return _dump(doc)


def load_computation(text: str) -> list:
    """Rows ``[state, [messages], label, state, [messages]]``, one per step."""
    steps = []
    for row in _seq(_compose(text)):
        parts = _seq(row)
        if len(parts) != 5:
            _fail(row, "a step is [state, channel, label, state, channel]")
        s, x, label, t, y = parts
        steps.append(ChannelStep(ChannelConfig(_scalar(s), tuple(_names(x))), _scalar(label),
                                 ChannelConfig(_scalar(t), tuple(_names(y)))))
    return steps


def dump_computation(steps) -> str:
    rows = [[st.source.state, list(st.source.channel), st.label, st.target.state, list(st.target.channel)]
            for st in steps]
    return _dump(rows)


# verdicts

def verdict_doc(v: Verdict) -> dict:
    doc = {"verdict": "Included" if v.included else "NotIncluded", "nodes": v.nodes}
    if not v.included:
        doc["cmax"] = v.initial.cmax
        doc["witness"] = _word_doc(v.witness)
        doc["initial"] = v.initial.render()
        doc["abstract_trace"] = [s.to_dict() for s in v.trace]
    return doc


def dump_verdict(v: Verdict) -> str:
    return _dump(verdict_doc(v))


def load_verdict(text: str) -> Verdict:
    root = _compose(text)
    doc = _mapping(root, ("verdict", "nodes"), ("cmax", "witness", "initial", "abstract_trace"))
    verdict = _scalar(doc["verdict"])
    nodes = _nat(doc["nodes"])
    if verdict == "Included":
        return Verdict(True, nodes=nodes)
    if verdict != "NotIncluded":
        _fail(doc["verdict"], "verdict must be Included or NotIncluded")
    for key in ("cmax", "witness", "initial", "abstract_trace"):
        if key not in doc:
            _fail(root, f"missing key {key!r}")
    cmax = _nat(doc["cmax"])

    def region(node):
        try:
            return parse_region_word(_scalar(node), cmax)
        except (RegionParseError, ValueError) as exc:
            _fail(node, str(exc))

    trace = []
    for sn in _seq(doc["abstract_trace"]):
        s = _mapping(sn, ("letter", "elapse", "edge", "word"))
        trace.append(TraceStep(_scalar(s["letter"]), _nat(s["elapse"]), _nat(s["edge"]), region(s["word"])))
    return Verdict(False, region(doc["initial"]), tuple(trace), _word_from(doc["witness"]), nodes)


# corpora

def dump_corpus(entries, seed: int) -> str:
    lines = [f"# seed={seed}"]
    lines += [f"{tag}\t{json.dumps(_word_doc(w))}" for tag, w in entries]
    return "\n".join(lines) + "\n"


def load_corpus(text: str) -> tuple:
    """``(seed, [(tag, word), ...])``; the seed is ``None`` when the header is missing."""
    seed, entries = None, []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if line.startswith("# seed="):
                seed = int(line.split("=", 1)[1])
            continue
        try:
            tag, payload = line.split("\t", 1)
            events = tuple((a, parse_time(str(t))) for a, t in json.loads(payload))
            entries.append((tag, TimedWord(events)))
        except (ValueError, TypeError) as exc:
            raise FormatError(f"bad corpus entry: {exc}", number, 1) from exc
    return seed, entries
