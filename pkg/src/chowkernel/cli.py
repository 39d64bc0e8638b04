"""Command-line entry point: ``chowkernel check|sweep|explain``."""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .pipeline import CHECK_NAMES, CheckParams, InvalidParams
from .verifier import (
    EXIT_INVALID,
    EXIT_OK,
    GRID_ENV,
    GridFormatError,
    RunConfig,
    explain,
    load_grid,
    run,
    sweep,
)


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"degrees must be comma-separated integers, got {text!r}")


def _add_run_options(sp: argparse.ArgumentParser) -> None:
    sel = sp.add_mutually_exclusive_group()
    sel.add_argument("--check", action="append", choices=CHECK_NAMES, metavar="NAME",
                     help=f"run only this check (repeatable): {', '.join(CHECK_NAMES)}")
    sel.add_argument("--all", action="store_true", help="run every check (the default)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--fail-fast", action="store_true", help="stop at the first failure")
    sp.add_argument("--no-timing", action="store_true",
                    help="omit elapsed time so output is byte-for-byte reproducible")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chowkernel",
        description="Exact verification of the cycle-coefficient computations for "
                    "hypersurfaces in complete intersections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run checks on one parameter tuple")
    check.add_argument("--n", type=int, required=True, help="dimension of Y")
    check.add_argument("--r", type=int, required=True, help="codimension of Y")
    check.add_argument("--degrees", type=_degrees, required=True, help="d_1,...,d_r")
    check.add_argument("--d", type=int, help="degree of X in Y (default max(d_r, 2(n+r)))")
    check.add_argument("--w", type=int, help="dimension of the test cycle (default: all 0..n-2)")
    _add_run_options(check)

    sw = sub.add_parser("sweep", help="run checks over a grid of tuples")
    sw.add_argument("--grid", metavar="FILE",
                    help=f"tuple file, one 'n r d1,d2,... [d=D] [w=W]' per line "
                         f"(default ${GRID_ENV}, else the built-in grid)")
    _add_run_options(sw)

    ex = sub.add_parser("explain", help="show the anchor and formula behind a check")
    ex.add_argument("name", choices=CHECK_NAMES)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    checks = tuple(args.check) if args.check else CHECK_NAMES
    return RunConfig(checks, args.format, args.fail_fast, not args.no_timing)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "explain":
        sys.stdout.write(explain(args.name))
        return EXIT_OK
    config = _config(args)
    if args.command == "check":
        try:
            params = CheckParams.create(args.n, args.r, args.degrees, args.d, args.w)
        except InvalidParams as exc:
            print(f"chowkernel: invalid parameters: {exc}", file=sys.stderr)
            return EXIT_INVALID
        report = run(params, config)
    else:
        try:
            grid = load_grid(args.grid)
        except (OSError, GridFormatError) as exc:
            print(f"chowkernel: cannot read grid: {exc}", file=sys.stderr)
            return EXIT_INVALID
        report = sweep(grid, config)
    sys.stdout.write(report.render(config.format, config.timing))
    return report.exit_status


if __name__ == "__main__":
    raise SystemExit(main())
