"""Command-line front end.

Exit codes: 0 success / holds / solution found, 1 no solution / violated,
2 usage or parse error, 3 engine diagnostic (livelock, inconclusive).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis
from .errors import EngineError, InconclusiveError, SceneError, ThermflowError
from .ltl import parse_formula
from .numeric import display, parse_rational, to_text
from .predicate import parse_predicate
from .scene import load_scene

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational_arg(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermflow",
        description="Simulate and model check hybrid thermal systems with exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", required=True, help="scene file or builtin:cs1|cs2|cs3")
    common.add_argument("--step", type=_rational_arg, help="override the scene time step")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--interleave",
        action="store_true",
        help="treat every discrete rule firing as its own transition",
    )

    sim = sub.add_parser("sim", parents=[common], help="simulate up to a time bound")
    sim.add_argument("--until", type=_rational_arg, required=True)
    sim.add_argument("--csv", metavar="PATH", help="write the full trace as CSV")
    sim.add_argument(
        "--collect",
        choices=["csv"],
        help="print one CSV row of temperatures per visited state instead of the final state",
    )

    for name, helptext in (
        ("search", "timed search for states satisfying a predicate"),
        ("find-earliest", "earliest state satisfying a predicate"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--pred", required=True, help="state predicate")
        p.add_argument("--step-cap", type=_positive_int, help="tick limit for unbounded search")
        if name == "search":
            p.add_argument("--until", type=_rational_arg, help="time bound (default: none)")
            p.add_argument("--max", type=_positive_int, default=1, help="solutions to report")

    mc = sub.add_parser("mc", parents=[common], help="time-bounded LTL model checking")
    mc.add_argument("--formula", required=True)
    mc.add_argument("--until", type=_rational_arg, required=True)
    mc.add_argument(
        "--prop",
        action="append",
        default=[],
        metavar="NAME=EXPR",
        help="bind an extra proposition (repeatable)",
    )
    return parser


def _solution_line(sample, precision):
    fields = [f"time={display(sample.clock, precision)}"]
    fields += [f"{k}={v}" for k, v in analysis.bindings(sample.config, precision).items()]
    return " ".join(fields)


def _solution_json(sample, precision):
    return {
        "clock": to_text(sample.clock),
        "time": display(sample.clock, precision),
        "bindings": analysis.bindings(sample.config, precision),
    }


def _emit(out, args, payload, lines):
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def _cmd_sim(args, scene, out):
    precision = scene.params.precision
    trace = analysis.simulate(scene, args.until, interleave=args.interleave)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            analysis.write_csv(trace, fh, precision)
    if args.collect == "csv":
        analysis.write_csv(trace, out, precision, temps_only=True)
        return EXIT_OK
    final = trace.final
    payload = {"command": "sim", "verdict": "done", **_solution_json(final, precision)}
    lines = [f"time={display(final.clock, precision)}"]
    lines += [f"{k}={v}" for k, v in analysis.bindings(final.config, precision).items()]
    _emit(out, args, payload, lines)
    return EXIT_OK


def _cmd_search(args, scene, out):
    precision = scene.params.precision
    pred = parse_predicate(args.pred, scene)
    if args.command == "find-earliest":
        until, limit = None, 1
    else:
        until, limit = args.until, args.max
    try:
        found = analysis.timed_search(
            scene, pred, until, limit, step_cap=args.step_cap, interleave=args.interleave
        )
    except InconclusiveError as exc:
        _emit(out, args, {"command": args.command, "verdict": "inconclusive",
                          "reason": str(exc), "solutions": []}, ["inconclusive"])
        return EXIT_ENGINE
    verdict = "solution" if found else "no solution"
    payload = {
        "command": args.command,
        "verdict": verdict,
        "solutions": [_solution_json(s, precision) for s in found],
    }
    lines = [_solution_line(s, precision) for s in found] or ["no solution"]
    _emit(out, args, payload, lines)
    return EXIT_OK if found else EXIT_NEGATIVE


def _cmd_mc(args, scene, out):
    precision = scene.params.precision
    extra = {}
    for binding in args.prop:
        name, sep, expr = binding.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--prop expects NAME=EXPR, got {binding!r}")
        extra[name.strip()] = parse_predicate(expr, scene)
    if extra:
        scene = scene.with_props(extra)
    formula = parse_formula(args.formula)
    result = analysis.model_check(scene, formula, args.until, interleave=args.interleave)
    payload = {"command": "mc", "verdict": result.verdict, "formula": str(formula)}
    lines = [result.verdict]
    if not result.holds:
        payload["counterexample"] = [
            _solution_json(s, precision) for s in result.counterexample
        ]
        lines.append("counterexample:")
        lines += ["  " + _solution_line(s, precision) for s in result.counterexample]
    _emit(out, args, payload, lines)
    return EXIT_OK if result.holds else EXIT_NEGATIVE


_COMMANDS = {"sim": _cmd_sim, "search": _cmd_search, "find-earliest": _cmd_search, "mc": _cmd_mc}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        scene = load_scene(args.scene)
        if args.step is not None:
            scene = scene.with_time_step(args.step)
        return _COMMANDS[args.command](args, scene, out)
    except (SceneError, UsageError, ValueError, OSError) as exc:
        err.write(f"thermflow: error: {exc}\n")
        return EXIT_USAGE
    except EngineError as exc:
        err.write(f"thermflow: engine: {exc}\n")
        return EXIT_ENGINE
    except ThermflowError as exc:
        err.write(f"thermflow: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
