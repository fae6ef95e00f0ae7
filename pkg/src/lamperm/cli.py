"""Command line interface.

Subcommands: check (typecheck a program), reduce (normalize under a
strategy), translate (simply typed or continuation-passing image),
measure (the termination measure), and verify (run the generated check
suite, optionally writing a report directory with CSV tables, failing
witnesses, and figures).

Programs are read in surface syntax by default, or as JSON syntax trees
with --format ast.  Exit codes: 0 on success, 1 when a check or type
fails, 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .ast_json import AstJsonError, dump_program, load_program, program_to_json
from .generate import GenConfig
from .measure import chi
from .reduction import FuelExhausted, Strategy, normalize, step
from .simple_translation import NotSimplyTyped, NotTargetType
from . import simple_translation as simple
from . import cps_translation as cps
from .suite import (
    ALL_CHECKS, run_suite, write_csv, write_failures, write_rule_csv,
)
from .surface import ParseError, parse_program, print_program, print_type
from .typecheck import CalculusId, TypeInferenceError, infer

_CALCULI = {"lambda": CalculusId.LambdaFull, "f": CalculusId.FFull}


def _load(path: str, fmt: str):
    with open(path) as fh:
        src = fh.read()
    if fmt == "ast":
        return load_program(src)
    return parse_program(src)


def _emit(ctx, term, fmt: str, extra: dict | None = None) -> None:
    if fmt == "ast":
        obj = program_to_json(ctx, term)
        if extra:
            obj.update(extra)
        print(json.dumps(obj, indent=2))
    else:
        sys.stdout.write(print_program(ctx, term))
        if extra:
            for key, value in extra.items():
                print(f"-- {key} : {value}")


def _fmt_path(path: tuple[int, ...]) -> str:
    return ".".join(str(i) for i in path) if path else "root"


def _cmd_check(args) -> int:
    ctx, term = _load(args.file, args.format)
    ty = infer(ctx, term)
    print(print_type(ty))
    return 0


def _cmd_reduce(args) -> int:
    ctx, term = _load(args.file, args.format)
    infer(ctx, term)
    try:
        nf, trace = normalize(term, Strategy(args.strategy), fuel=args.fuel,
                              ctx=ctx)
        exhausted = False
    except FuelExhausted as exc:
        nf, trace = exc.term, exc.trace
        exhausted = True
    if args.trace:
        cur = term
        for i, s in enumerate(trace):
            line = f"step {i}: {s.rule.value} at {_fmt_path(s.path)}"
            if args.chi:
                before = chi(cur)
                cur = step(cur, s, ctx)
                line += f" chi {before} -> {chi(cur)}"
            print(line)
    _emit(ctx, nf, args.format)
    if exhausted:
        print(f"fuel exhausted after {len(trace)} steps", file=sys.stderr)
        return 1
    return 0


def _cmd_translate(args) -> int:
    ctx, term = _load(args.file, args.format)
    ty = infer(ctx, term)
    if args.target == "simple":
        out_ctx = simple.tr_ctx(ctx)
        out_term = simple.tr_term(ctx, term)
        out_ty = simple.tr_type(ty)
    else:
        out_ctx = cps.trf_ctx(ctx)
        out_term = cps.trf_term(ctx, term)
        out_ty = cps.trf_type(ty)
    extra = {"type": print_type(out_ty)} if args.show_type else None
    _emit(out_ctx, out_term, args.format, extra)
    return 0


def _cmd_measure(args) -> int:
    _, term = _load(args.file, args.format)
    print(chi(term))
    return 0


def _cmd_verify(args) -> int:
    checks = tuple(args.checks.split(",")) if args.checks else ALL_CHECKS
    cfg = GenConfig(calculus=_CALCULI[args.calculus], max_size=args.max_size,
                    seed=args.seed)
    report = run_suite(cfg, args.count, checks)
    print(report.render_text())
    if args.report_dir:
        from .figures import render_report_figures
        os.makedirs(args.report_dir, exist_ok=True)
        write_csv(report, os.path.join(args.report_dir, "checks.csv"))
        write_rule_csv(report, os.path.join(args.report_dir, "rules.csv"))
        write_failures(report, os.path.join(args.report_dir, "failures.txt"))
        paths = render_report_figures(report, args.report_dir)
        written = [os.path.join(args.report_dir, n)
                   for n in ("checks.csv", "rules.csv", "failures.txt")]
        for p in written + paths:
            print(f"wrote {p}")
    return 0 if report.all_passed() else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamperm",
        description="kernel, reducer, and checked translations for lambda "
                    "calculi with sums, pairs, and absurdity")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("file", help="program file")
        p.add_argument("--format", choices=["surface", "ast"],
                       default="surface",
                       help="input/output syntax (default: surface)")

    p = sub.add_parser("check", help="typecheck a program and print its type")
    add_io(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reduce", help="normalize a program")
    add_io(p)
    p.add_argument("--strategy", choices=[s.value for s in Strategy],
                   default=Strategy.LeftmostOutermost.value)
    p.add_argument("--fuel", type=int, default=100_000)
    p.add_argument("--trace", action="store_true",
                   help="print each step taken")
    p.add_argument("--chi", action="store_true",
                   help="include the measure in trace lines")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("translate", help="translate into a smaller fragment")
    add_io(p)
    p.add_argument("--target", choices=["simple", "cps"], required=True)
    p.add_argument("--show-type", action="store_true",
                   help="also print the translated type")
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("measure", help="print the termination measure")
    add_io(p)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("verify", help="run the generated check suite")
    p.add_argument("--calculus", choices=sorted(_CALCULI), default="lambda")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", type=int, default=30)
    p.add_argument("--checks", default="",
                   help="comma-separated check names (default: all)")
    p.add_argument("--report-dir", default="",
                   help="write CSV tables, witnesses, and figures here")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, AstJsonError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TypeInferenceError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return 1
    except (NotSimplyTyped, NotTargetType) as exc:
        print(f"translation error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
