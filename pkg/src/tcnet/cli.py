"""Command-line front end.

Exit status: 0 for a positive answer (accepted, Included, true, in the
language), 1 for a negative one, 2 for errors and exhausted budgets.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .automata import AutomatonError, WordError, membership
from .channel import (
    ChannelError,
    check_computation,
    classify,
    encode_computation,
    gen_complement_ta,
    gen_condition10_vonca,
    gen_exclusion_net,
    gen_universality_automaton,
    generate_corpus,
    infer_n,
    reachable,
)
from .inclusion import DEFAULT_BUDGET, BudgetExhausted, InclusionError, check_inclusion, check_universality, prepare
from .mtl import MtlError, eval_at, parse_mtl, to_text
from .regionwords import RegionParseError, parse_region_word, successors, time_successors

DEFAULT_SEED = 0

GADGETS = {
    "net": gen_exclusion_net,
    "complement": gen_complement_ta,
    "cond10": gen_condition10_vonca,
    "universality": gen_universality_automaton,
}


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(args, doc: dict, lines: list):
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _word_text(w) -> str:
    return " ".join(f"({a},{formats.format_time(t)})" for a, t in w)


def cmd_member(args) -> int:
    aut = formats.load_automaton(_read(args.automaton))
    w = formats.load_word(_read(args.word))
    result = membership(aut, w)
    doc = {"accepted": result.accepted}
    lines = ["accepted" if result.accepted else "rejected"]
    if result.accepted and args.witness:
        doc["run"] = [
            {"source": str(s.source), "delay": formats.format_time(s.delay), "letter": s.letter,
             "target": str(s.target)}
            for s in result.witness
        ]
        lines += [f"  {s.source} --{formats.format_time(s.delay)},{s.letter}--> {s.target}" for s in result.witness]
    _emit(args, doc, lines)
    return 0 if result.accepted else 1


def _verdict_output(args, verdict) -> int:
    doc = formats.verdict_doc(verdict)
    if args.output:
        Path(args.output).write_text(formats.dump_verdict(verdict), encoding="utf-8")
    lines = [doc["verdict"], f"nodes expanded: {verdict.nodes}"]
    if not verdict.included:
        lines.append(f"witness (verified): {_word_text(verdict.witness)}")
        lines.append(f"initial: {doc['initial']}")
        lines += [f"  {s['letter']} -> {s['word']}" for s in doc["abstract_trace"]]
    _emit(args, doc, lines)
    return 0 if verdict.included else 1


def cmd_include(args) -> int:
    a = formats.load_automaton(_read(args.a))
    b = formats.load_automaton(_read(args.b))
    return _verdict_output(args, check_inclusion(a, b, budget=args.budget, cmax=args.cmax))


def cmd_universal(args) -> int:
    b = formats.load_automaton(_read(args.b))
    return _verdict_output(args, check_universality(b, budget=args.budget, cmax=args.cmax))


def cmd_mtl(args) -> int:
    phi = parse_mtl(args.formula)
    w = formats.load_word(_read(args.word))
    value = eval_at(w, args.position, phi)
    _emit(args, {"formula": to_text(phi), "position": args.position, "value": value},
          ["true" if value else "false"])
    return 0 if value else 1


def cmd_regions(args) -> int:
    a = formats.load_automaton(_read(args.a))
    b = formats.load_automaton(_read(args.b))
    p = prepare(a, b, args.cmax)
    w = parse_region_word(args.word, p.cmax)
    chain = [t.render() for t in time_successors(w)]
    doc = {"cmax": p.cmax, "word": w.render(), "time_successors": chain}
    lines = [f"cmax: {p.cmax}", "time successors:"] + [f"  {t}" for t in chain]
    if args.letter is not None:
        if args.letter not in p.letters:
            raise UsageError(f"letter {args.letter!r} is not in the alphabet")
        succ = sorted(s.render() for s in successors(w, args.letter, p.a, p.b))
        doc["letter"] = args.letter
        doc["successors"] = succ
        lines += [f"{args.letter}-successors:"] + [f"  {s}" for s in succ]
    _emit(args, doc, lines)
    return 0


def _steps_doc(steps) -> list:
    return [[st.source.state, list(st.source.channel), st.label, st.target.state, list(st.target.channel)]
            for st in steps]


def cmd_cm_simulate(args) -> int:
    c = formats.load_machine(_read(args.machine))
    target = args.target or c.final
    if target is None:
        raise UsageError("no --target given and the machine has no final state")
    res = reachable(c, target, mode=args.mode, max_len=args.max_len, max_depth=args.max_depth)
    doc = {"found": res.found, "mode": args.mode, "target": target, "computation": _steps_doc(res.computation)}
    if res.found:
        lines = [f"reached {target} ({args.mode})"] + [f"  {st}" for st in res.computation]
    else:
        doc["within_bounds_only"] = res.within_bounds_only
        lines = [f"{target} not reached within len {args.max_len}, depth {args.max_depth}"]
    _emit(args, doc, lines)
    return 0 if res.found else 1


def cmd_cm_check_enc(args) -> int:
    c = formats.load_machine(_read(args.machine))
    w = formats.load_word(_read(args.word))
    n = infer_n(w, c) if args.n is None else args.n
    violations = classify(w, c, n).violations
    in_lc = not [v for v in violations if v != "10"]
    in_lef = not violations
    doc = {"n": n, "in_LC": in_lc, "in_Lef": in_lef, "violations": list(violations)}
    if in_lef:
        line = f"in L(C,{n}); in L_ef(C,{n})"
    elif in_lc:
        line = f"in L(C,{n}); not in L_ef(C,{n}): condition 10 violated"
    else:
        line = f"not in L(C,{n}): conditions {', '.join(violations)} violated"
    _emit(args, doc, [line])
    return 0 if in_lc else 1


def cmd_cm_encode(args) -> int:
    c = formats.load_machine(_read(args.machine))
    if args.computation:
        steps = formats.load_computation(_read(args.computation))
    else:
        res = reachable(c, c.final, mode=args.mode, max_len=args.max_len, max_depth=args.max_depth)
        if not res.found:
            raise UsageError("no computation to the final state found within the bounds")
        steps = list(res.computation)
    w = encode_computation(c, steps, n=args.n, start=args.start)
    doc = {"word": json.loads(formats.dump_word(w)), "error_free": check_computation(c, steps, exact=True)}
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        sys.stdout.write(formats.dump_word(w))
    return 0


def cmd_cm_gen(args) -> int:
    c = formats.load_machine(_read(args.machine))
    aut = GADGETS[args.gadget](c)
    text = formats.dump_automaton(aut)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {len(aut.locations)} locations, {len(aut.edges)} edges")
    else:
        sys.stdout.write(text)
    return 0


def cmd_cm_corpus(args) -> int:
    c = formats.load_machine(_read(args.machine))
    entries = generate_corpus(c, size=args.size, seed=args.seed)
    text = formats.dump_corpus(entries, args.seed)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {len(entries)} words")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document instead of text")
    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="node expansion limit")
    search.add_argument("--cmax", type=_natural, default=None, help="region bound (default: max constant + 1)")
    search.add_argument("-o", "--output", help="also write the verdict document to this file")
    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--mode", choices=("exact", "faulty"), default="exact")
    bounds.add_argument("--max-len", type=_natural, default=5)
    bounds.add_argument("--max-depth", type=_natural, default=50)

    parser = argparse.ArgumentParser(prog="tcnet", description="Timed automata, counter nets and inclusion checking.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("member", parents=[common], help="does an automaton accept a timed word")
    p.add_argument("automaton")
    p.add_argument("word")
    p.add_argument("--witness", action="store_true", help="print an accepting run")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("include", parents=[common, search], help="decide L(A) ⊆ L(B)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_include)

    p = sub.add_parser("universal", parents=[common, search], help="decide universality of a counter net")
    p.add_argument("b")
    p.set_defaults(func=cmd_universal)

    p = sub.add_parser("mtl", parents=[common], help="evaluate an MTL formula on a timed word")
    p.add_argument("formula")
    p.add_argument("word")
    p.add_argument("--position", type=_positive, default=1)
    p.set_defaults(func=cmd_mtl)

    p = sub.add_parser("regions", parents=[common], help="time and letter successors of a region word")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("word", help="rendered region word, e.g. '{A:p.y@0[],B:q.x@0[0]}|{}'")
    p.add_argument("letter", nargs="?")
    p.add_argument("--cmax", type=_natural, default=None)
    p.set_defaults(func=cmd_regions)

    cm = sub.add_parser("cm", help="channel machines").add_subparsers(dest="cm_command", required=True)

    q = cm.add_parser("simulate", parents=[common, bounds], help="bounded search for a state")
    q.add_argument("machine")
    q.add_argument("--target")
    q.set_defaults(func=cmd_cm_simulate)

    q = cm.add_parser("check-enc", parents=[common], help="check a word against the encoding conditions")
    q.add_argument("machine")
    q.add_argument("word")
    q.add_argument("--n", type=_natural, default=None, help="channel length (default: inferred)")
    q.set_defaults(func=cmd_cm_check_enc)

    q = cm.add_parser("encode", parents=[common, bounds], help="encode a computation as a timed word")
    q.add_argument("machine")
    q.add_argument("--computation", help="file with [state, channel, label, state, channel] rows")
    q.add_argument("--n", type=_natural, default=None)
    q.add_argument("--start", default="1", help="timestamp of the first letter")
    q.set_defaults(func=cmd_cm_encode)

    q = cm.add_parser("gen", help="generate an automaton from a machine")
    q.add_argument("machine")
    q.add_argument("--gadget", choices=sorted(GADGETS), required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_cm_gen)

    q = cm.add_parser("corpus", help="seeded corpus of timed words")
    q.add_argument("machine")
    q.add_argument("--size", type=_positive, default=500)
    q.add_argument("--seed", type=int, default=DEFAULT_SEED)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_cm_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, formats.FormatError, AutomatonError, WordError, InclusionError, MtlError,
            ChannelError, RegionParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
