"""``boxtt`` command line: evaluate programs, trace them, compute moduli, run suites.

Exit codes: 0 success, 1 a check failed, 2 evaluation got stuck, 3 evaluation
ran out of fuel, 64 usage error, 65 malformed input, 74 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from boxtt.continuity import (
    EvaluationFailed, ModulusError, PurityViolation, compute_modulus, oracle_modulus,
)
from boxtt.evaluator import (
    DEFAULT_FUEL, Done, StuckAt, Timeout, eval_trace, evaluate, write_trace_jsonl,
)
from boxtt.sexpr import ParseError, parse, parse_world, to_sexpr, world_to_sexpr
from boxtt.terms import Term, names
from boxtt.validation import suites
from boxtt.worlds import RefWorld

EX_OK, EX_FAILED, EX_STUCK, EX_TIMEOUT = 0, 1, 2, 3
EX_USAGE, EX_DATAERR, EX_IOERR = 64, 65, 74


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def default_fuel() -> int:
    raw = os.environ.get("BOXTT_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        raise CliError(f"BOXTT_FUEL must be an integer, got {raw!r}", EX_USAGE) from None
    if fuel < 1:
        raise CliError("BOXTT_FUEL must be positive", EX_USAGE)
    return fuel


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EX_IOERR) from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}", EX_IOERR) from None


def load_term(path: str) -> Term:
    try:
        return parse(_read(path))
    except ParseError as e:
        raise CliError(f"{path}:{e}", EX_DATAERR) from None


def load_world(path: Optional[str]) -> RefWorld:
    if path is None:
        return RefWorld()
    try:
        return parse_world(_read(path))
    except ParseError as e:
        raise CliError(f"{path}:{e}", EX_DATAERR) from None


def _check_names(t: Term, w: RefWorld, label: str) -> None:
    missing = sorted(n for n in names(t) if w.cell(n) is None)
    if missing:
        raise CliError(f"{label} mentions (name {missing[0]}) but the world has no such cell",
                       EX_DATAERR)


def _fuel(args) -> int:
    fuel = args.fuel if args.fuel is not None else default_fuel()
    if fuel < 1:
        raise CliError("--fuel must be positive", EX_USAGE)
    return fuel


def _report_result(result, out=None) -> int:
    out = out or sys.stdout
    match result:
        case Done(value, world, steps):
            print(f"value: {to_sexpr(value)}", file=out)
            print(f"world: {world_to_sexpr(world)}", file=out)
            print(f"steps: {steps}", file=out)
            return EX_OK
        case StuckAt(term, world, reason, steps):
            print(f"stuck ({reason.value}) after {steps} steps: {to_sexpr(term)}", file=out)
            print(f"world: {world_to_sexpr(world)}", file=out)
            return EX_STUCK
        case Timeout(_, world, steps):
            print(f"out of fuel after {steps} steps", file=out)
            print(f"world: {world_to_sexpr(world)}", file=out)
            return EX_TIMEOUT
    raise AssertionError(result)


def cmd_eval(args) -> int:
    t, w = load_term(args.file), load_world(args.world)
    _check_names(t, w, args.file)
    return _report_result(evaluate(t, w, _fuel(args)))


def cmd_trace(args) -> int:
    t, w = load_term(args.file), load_world(args.world)
    _check_names(t, w, args.file)
    trace = eval_trace(t, w, _fuel(args))
    if args.json:
        try:
            with open(args.json, "w") as fp:
                write_trace_jsonl(trace, fp)
        except OSError as e:
            raise CliError(f"cannot write {args.json}: {e.strerror or e}", EX_IOERR) from None
    else:
        for i, (term, world) in enumerate(trace.states):
            print(f"{i}: {to_sexpr(term)}  {world_to_sexpr(world)}")
    return _report_result(trace.result, None if args.json else sys.stderr)


def cmd_modulus(args) -> int:
    f, alpha, w = load_term(args.F), load_term(args.alpha), load_world(args.world)
    fuel = _fuel(args)
    try:
        rep = compute_modulus(f, alpha, w, fuel)
        oracle = oracle_modulus(f, alpha, w, fuel)
    except PurityViolation as e:
        print(f"purity violation: {e}", file=sys.stderr)
        return EX_FAILED
    except EvaluationFailed as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_TIMEOUT if isinstance(e.result, Timeout) else EX_STUCK
    except ModulusError as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_FAILED
    except ValueError as e:
        raise CliError(str(e), EX_DATAERR) from None
    agree = rep.modulus == oracle
    print(f"modulus = {rep.modulus}, oracle = {oracle}, {'AGREE' if agree else 'DISAGREE'}")
    if args.report:
        _write(args.report, json.dumps({**rep.to_json(), "oracle": oracle, "agree": agree},
                                       indent=2) + "\n")
    return EX_OK if agree else EX_FAILED


def cmd_check(args) -> int:
    fuel = _fuel(args)
    for name, value in (("--cases", args.cases), ("--betas", args.betas),
                        ("--samples", args.samples)):
        if value < 1:
            raise CliError(f"{name} must be positive", EX_USAGE)
    if args.depth < 0:
        raise CliError("--depth must be non-negative", EX_USAGE)
    case_list = None
    if args.replay:
        try:
            case_list = [suites.CaseSpec.from_sexpr(_read(p)) for p in args.replay]
        except (ParseError, ValueError, KeyError, IndexError, AttributeError) as e:
            raise CliError(f"malformed case file: {e}", EX_DATAERR) from None
    reports = suites.run_suites([args.suite], args.cases, args.seed, fuel, args.betas,
                                args.samples, args.depth, case_list)
    for r in reports:
        print(r.summary())
        for f in r.failures[:args.show]:
            print(f"  seed {f.seed}: {f.message} (expected {f.expected!r}, got {f.actual!r})")
        if args.dump_failures and r.failed_cases:
            for p in r.dump_failures(Path(args.dump_failures)):
                print(f"  wrote {p}")
    if args.json:
        params = {"suite": args.suite, "cases": args.cases, "seed": args.seed, "fuel": fuel,
                  "betas": args.betas, "samples": args.samples, "depth": args.depth}
        doc = {"params": params, "passed": all(r.passed for r in reports),
               "reports": [r.to_json(timing=not args.no_timing) for r in reports]}
        _write(args.json, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EX_OK if all(r.passed for r in reports) else EX_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boxtt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, world=True):
        if world:
            sp.add_argument("--world", metavar="WFILE", help="world literal file")
        sp.add_argument("--fuel", type=int, help=f"step bound (default $BOXTT_FUEL or {DEFAULT_FUEL})")

    e = sub.add_parser("eval", help="evaluate a program")
    e.add_argument("file")
    common(e)
    e.set_defaults(run=cmd_eval)

    t = sub.add_parser("trace", help="print every state of an evaluation")
    t.add_argument("file")
    common(t)
    t.add_argument("--json", metavar="OUT", help="write the trace as JSON lines")
    t.set_defaults(run=cmd_trace)

    m = sub.add_parser("modulus", help="compute the modulus of F at alpha and compare to the oracle")
    m.add_argument("F")
    m.add_argument("alpha")
    common(m)
    m.add_argument("--report", metavar="OUT", help="write a JSON report")
    m.set_defaults(run=cmd_modulus)

    c = sub.add_parser("check", help="run validation suites")
    c.add_argument("suite", choices=suites.SUITES + ("all",))
    common(c, world=False)
    c.add_argument("--cases", type=int, default=suites.DEFAULT_CASES)
    c.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    c.add_argument("--betas", type=int, default=suites.DEFAULT_BETAS)
    c.add_argument("--samples", type=int, default=suites.DEFAULT_SAMPLES)
    c.add_argument("--depth", type=int, default=suites.DEFAULT_DEPTH)
    c.add_argument("--json", metavar="OUT", help="write a JSON report")
    c.add_argument("--no-timing", action="store_true", help="omit wall times from the JSON report")
    c.add_argument("--dump-failures", metavar="DIR", help="write failing cases as .sexp files")
    c.add_argument("--replay", nargs="+", metavar="CASE", help="run these case files instead")
    c.add_argument("--show", type=int, default=5, help="failures to print per suite")
    c.set_defaults(run=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    try:
        return args.run(args)
    except CliError as e:
        print(f"boxtt: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
