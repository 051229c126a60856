"""Command line front end.

Exit codes: 0 success, 1 malformed input or inapplicable request, 2 a
checked property was violated (at least one counterexample is printed on
standard output).  Identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import abelian
from .diagram import Diagram, parse, serialize
from .errors import KnotwindError
from .moves import ALL_KINDS, Move, apply, random_walk
from .parity import (
    ParityAssignment,
    WINDING_KINDS_RE,
    check_axioms,
    resolve_parity,
)
from .trace import dump_trace, read_trace
from .universal import InconsistencyWitness, build_universal, factor, presentation_report

OK = 0
INPUT_ERROR = 1
VIOLATION = 2


def _read_diagram(path: str) -> Diagram:
    return parse(Path(path).read_text(encoding="utf-8"))


def _vec(values) -> str:
    return " ".join(str(x) for x in values)


def cmd_validate(args) -> int:
    d = _read_diagram(args.file)
    if args.json:
        print(json.dumps({"canonical": serialize(d)}))
    else:
        print(serialize(d))
    return OK


def cmd_info(args) -> int:
    d = _read_diagram(args.file)
    labels = d.arc_labels()
    rows = []
    for c in d.crossings():
        lab = d.crossing_label(c)
        rows.append((c, d.crossing_sign(c), lab.raw, lab.reduced.rep))
    if args.json:
        print(
            json.dumps(
                {
                    "degree": d.degree(),
                    "knot_class": list(d.knot_class()),
                    "arc_labels": {str(e): v for e, v in sorted(labels.items())},
                    "crossings": [
                        {"id": c, "sign": s, "raw": raw, "reduced": list(red)}
                        for c, s, raw, red in rows
                    ],
                }
            )
        )
        return OK
    print(f"degree {d.degree()}")
    print(f"knot_class {_vec(d.knot_class())}")
    for e in sorted(labels):
        print(f"arc_label {e} {labels[e]}")
    for c, s, raw, red in rows:
        print(f"crossing {c} sign {s:+d} raw {raw} reduced {_vec(red)}")
    return OK


def _print_assignment(p: ParityAssignment, as_json: bool) -> None:
    if as_json:
        print(
            json.dumps(
                {
                    "kind": p.kind,
                    "group": p.group.describe(),
                    "invariant_factors": list(p.group.invariant_factors),
                    "free_rank": p.group.free_rank,
                    "fixed": list(p.fixed.rep),
                    "values": {str(c): list(e.rep) for c, e in sorted(p.values.items())},
                }
            )
        )
        return
    print(f"kind {p.kind}")
    print(f"group {p.group.describe()}")
    print(f"invariant_factors {_vec(p.group.invariant_factors) or '-'}")
    print(f"free_rank {p.group.free_rank}")
    print(f"fixed {_vec(p.fixed.rep)}")
    for c in sorted(p.values):
        print(f"value {c} {_vec(p.values[c].rep)}")


def cmd_parity(args) -> int:
    d = _read_diagram(args.file)
    _print_assignment(resolve_parity(args.kind)(d), args.json)
    return OK


def _parse_param(text: str):
    key, _, raw = text.partition("=")
    if not _:
        raise KnotwindError(f"bad --param {text!r}, expected key=value")
    if "," in raw:
        return key, tuple(int(x) for x in raw.split(","))
    try:
        return key, int(raw)
    except ValueError:
        return key, raw


def cmd_apply(args) -> int:
    d = _read_diagram(args.file)
    if args.move not in ALL_KINDS:
        raise KnotwindError(f"unknown move kind {args.move!r}")
    site = tuple(int(x) for x in args.at.split(",")) if args.at else ()
    params = dict(_parse_param(p) for p in args.param or [])
    result, corr = apply(d, Move(args.move, site, params))
    text = serialize(result)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.json:
        out = {
            "result": text,
            "surviving": {str(k): v for k, v in sorted(corr.surviving.items())},
            "created": sorted(corr.created),
            "destroyed": sorted(corr.destroyed),
        }
        if corr.r3_roles:
            out["r3_roles"] = list(corr.r3_roles)
        print(json.dumps(out))
        return OK
    if not args.out:
        print(text)
    print("surviving " + (" ".join(f"{k}->{v}" for k, v in sorted(corr.surviving.items())) or "-"))
    print("created " + (_vec(sorted(corr.created)) or "-"))
    print("destroyed " + (_vec(sorted(corr.destroyed)) or "-"))
    if corr.r3_roles:
        print(f"r3_roles {_vec(corr.r3_roles)}")
    return OK


def _fault_wrapper(kind: str, spec: str):
    """Shift one crossing's value on one trace diagram; a test hook that
    the axiom checker must catch."""
    at_index, _, crossing = spec.partition(":")
    at_index, crossing = int(at_index), int(crossing)
    base = resolve_parity(kind)
    counter = {"i": -1}

    def wrapped(d):
        counter["i"] += 1
        p = base(d)
        if counter["i"] == at_index and crossing in p.values:
            bump = p.group.canonical((1,) + (0,) * (p.group.rank - 1))
            values = dict(p.values)
            values[crossing] = values[crossing] + bump
            return ParityAssignment(p.kind, p.group, p.fixed, values)
        return p

    wrapped.__name__ = kind
    return wrapped


def cmd_walk(args) -> int:
    d = _read_diagram(args.file)
    trace = random_walk(d, args.steps, args.seed, args.cap)
    if args.trace_out:
        Path(args.trace_out).write_text(dump_trace(trace), encoding="utf-8")
    diagrams = trace.diagrams()
    print(f"start {len(d.code)} symbols, degree {d.degree()}")
    print(f"steps {len(trace.steps)}")
    print(f"final {len(diagrams[-1].code)} symbols")
    violations = 0
    kc = d.knot_class()
    for i, dd in enumerate(diagrams):
        if dd.knot_class() != kc:
            print(f"violation step {i}: knot class changed to {_vec(dd.knot_class())}")
            violations += 1
    if not violations:
        print("invariants ok: degree and knot class constant")
    for kind in [k for k in (args.check or "").split(",") if k]:
        if not WINDING_KINDS_RE.match(kind):
            raise KnotwindError(f"{kind!r} is not a winding parity kind")
        fn = _fault_wrapper(kind, args.inject_fault) if args.inject_fault else kind
        report = check_axioms(trace, fn)
        for ce in report.counterexamples:
            print(f"violation {kind}: {ce}")
            violations += 1
        counts = " ".join(f"{a}:{report.passes.get(a, 0)}" for a in ("A1", "A2", "A3", "A4", "A5"))
        status = "ok" if report.ok else "FAILED"
        print(f"check {kind}: {status} ({counts})")
    return VIOLATION if violations else OK


def cmd_universal(args) -> int:
    trace = read_trace(args.trace)
    u = build_universal(trace)
    report = presentation_report(u)
    if args.json:
        print(json.dumps(report))
    else:
        print(f"generators {len(u.generators)}")
        counts = " ".join(f"type{t}:{report['relation_counts'][str(t)]}" for t in (1, 2, 3, 4, 5))
        print(f"relations {counts}")
        print(f"group {report['group']}")
        print(f"one_class {_vec(u.one_class.rep)}")
        for key in sorted(report["classes"]):
            print(f"class {key} {_vec(report['classes'][key])}")
    if args.factor:
        outcome = factor(u, trace, args.factor)
        if isinstance(outcome, InconsistencyWitness):
            print(f"violation factor {args.factor}: {outcome}")
            return VIOLATION
        print(f"factor {args.factor}: ok rho(1) = {_vec(outcome(u.one_class).rep)}")
    return OK


def cmd_snf(args) -> int:
    tokens = Path(args.matrix).read_text(encoding="utf-8").split()
    if len(tokens) < 2:
        raise KnotwindError("matrix file needs 'rows cols' then the entries")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
        entries = [int(t) for t in tokens[2:]]
    except ValueError as exc:
        raise KnotwindError(f"bad matrix file: {exc}") from None
    if len(entries) != rows * cols:
        raise KnotwindError(f"expected {rows * cols} entries, got {len(entries)}")
    a = [entries[i * cols : (i + 1) * cols] for i in range(rows)]
    u, dmat, v = abelian.smith_normal_form(a)
    if args.json:
        print(json.dumps({"u": u, "d": dmat, "v": v}))
        return OK
    for name, mat in (("U", u), ("D", dmat), ("V", v)):
        print(name)
        for row in mat:
            print(_vec(row))
    return OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="knotwind",
        description="Diagrams of knots in (surface x circle): moves, parities, and their universal group.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("validate", cmd_validate, "parse a diagram file and print its canonical form")
    p.add_argument("file")

    p = add("info", cmd_info, "degree, arc labels, crossing labels, signs, knot class")
    p.add_argument("file")

    p = add("parity", cmd_parity, "print a parity assignment")
    p.add_argument("file")
    p.add_argument(
        "--kind",
        default="label",
        help="label | label-mod:<n> | gauss | homological | homological-s1 | homological-sg-oriented",
    )

    p = add("apply", cmd_apply, "apply one move and print the correspondence")
    p.add_argument("file")
    p.add_argument("--move", required=True, help="move kind, e.g. m4prime or r1_remove")
    p.add_argument("--at", default="", help="comma-separated site, e.g. 1 or 0,3")
    p.add_argument("--param", action="append", help="extra move parameter key=value")
    p.add_argument("--out", help="write the resulting diagram here")

    p = add("walk", cmd_walk, "seeded random walk with invariant and axiom checking")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=40, help="prefer removals above this code size")
    p.add_argument("--trace-out", help="write the trace as JSON lines")
    p.add_argument("--check", default="", help="comma-separated winding parity kinds")
    p.add_argument("--inject-fault", help="test hook: INDEX:CROSSING value shift")

    p = add("universal", cmd_universal, "build the universal presentation from a trace file")
    p.add_argument("trace")
    p.add_argument("--factor", help="verify the factorization for this parity kind")

    p = add("snf", cmd_snf, "Smith normal form of an integer matrix file")
    p.add_argument("matrix")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except KnotwindError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except FileNotFoundError as exc:
        print(f"error: File: {exc}", file=sys.stderr)
        return INPUT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
