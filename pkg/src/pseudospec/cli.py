"""Command-line entry point.

Subcommands: ``filter-profile``, ``burgers``, ``euler``, ``verify``. Every
flag is an override of the corresponding config key, so a run is fully
described by (config file, overrides), both of which end up in the run
manifest. Exit codes: 0 success, 2 config error, 3 solver failure,
4 data-integrity error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, IntegrityError, SolverError
from .runner import resolve_config, run_experiment, verify_run

_FILTER_CHOICES = ("sharp23", "smooth36")
_IC_CHOICES = ("sine", "inverse-sqrt")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--out", default="runs", help="base output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudospec",
        description="Pseudo-spectral solver experiments with two dealiasing filters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter-profile", help="tabulate both cutoff profiles")
    _add_common(p)

    p = sub.add_parser("burgers", help="1-d convergence study against the oracle")
    _add_common(p)
    p.add_argument("--ic", choices=_IC_CHOICES, help="initial condition")
    p.add_argument("--filter", choices=_FILTER_CHOICES, help="run a single filter")
    p.add_argument(
        "--t-end",
        type=float,
        dest="t_end",
        help="replace the output-time sequence with this single time",
    )

    p = sub.add_parser("euler", help="3-d vortex-tube run with diagnostics")
    _add_common(p)
    p.add_argument("--dims", help="grid points per dimension, e.g. 64,64,128")
    p.add_argument("--t-end", type=float, dest="t_end", help="final time")
    p.add_argument("--filter", choices=_FILTER_CHOICES, help="run a single filter")
    p.add_argument("--restart", help="checkpoint file to continue from")

    p = sub.add_parser("verify", help="recompute checksums of an archived run")
    p.add_argument("run_dir", help="run directory containing manifest.json")
    return parser


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"invalid --dims {text!r}: {exc}") from exc
    if len(dims) != 3:
        raise ConfigError(f"--dims needs three comma-separated values, got {text!r}")
    return dims


def _overrides(args: argparse.Namespace) -> dict:
    over: dict = {}
    if args.command == "burgers":
        section: dict = {}
        if args.ic is not None:
            section["ic"] = args.ic
        if args.filter is not None:
            section["filters"] = [args.filter]
        if args.t_end is not None:
            section["output_times"] = [args.t_end]
        if section:
            over["burgers"] = section
    elif args.command == "euler":
        section = {}
        if args.dims is not None:
            section["dims"] = _parse_dims(args.dims)
        if args.t_end is not None:
            section["t_end"] = args.t_end
        if args.filter is not None:
            section["filters"] = [args.filter]
        if section:
            over["euler"] = section
    return over


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            problems = verify_run(args.run_dir)
            for line in problems:
                print(line)
            if problems:
                return 4
            print("ok")
            return 0
        config = resolve_config(args.config, _overrides(args))
        restart = getattr(args, "restart", None)
        run_dir = run_experiment(args.command, args.out, config, restart=restart)
        print(run_dir)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
