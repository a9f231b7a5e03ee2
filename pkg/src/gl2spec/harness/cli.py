"""gl2spec command line: run a check grid, print a table, write CSV or JSON."""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .report import COMMANDS, ConfigError, ExperimentConfig, render_table, run


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated fractions, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gl2spec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--primes", type=_int_list, default=(3,), help="comma-separated odd primes (q for weil)")
        cmd.add_argument("--r-min", type=int, default=0)
        cmd.add_argument("--r-max", type=int, default=2)
        cmd.add_argument("--A", type=int, default=1)
        cmd.add_argument("--chi", default="trivial", help="trivial, all, or LEVEL:K[:OMEGA]")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--out", type=Path, default=None)
        cmd.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        cmd.add_argument("--weight", type=int, default=1)
        cmd.add_argument("--max-degree", type=int, default=2)
        cmd.add_argument("--k", type=_int_list, default=(12,))
        cmd.add_argument("--n-max", type=int, default=50)
        cmd.add_argument("--M", type=_int_list, default=(4, 8))
        cmd.add_argument("--z", type=_fraction_list, default=(Fraction(0), Fraction(1, 3)), help="exponents of roots of unity")
        cmd.add_argument("--quiet", action="store_true", help="skip the summary table")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        command=args.command,
        primes=args.primes,
        r_range=(args.r_min, args.r_max),
        A=args.A,
        output_format=args.format,
        output_path=args.out,
        chi=args.chi,
        jobs=args.jobs,
        weight=args.weight,
        max_degree=args.max_degree,
        weights_k=args.k,
        n_max=args.n_max,
        fejer_M=args.M,
        fejer_z=args.z,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(config_from_args(args))
    except (ConfigError, ValueError) as exc:
        print(f"gl2spec: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gl2spec: I/O error: {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        sys.stdout.write(render_table(report))
    return 1 if report.fail_count else 0


if __name__ == "__main__":
    sys.exit(main())
