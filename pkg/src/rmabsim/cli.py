"""Command-line front end.

    rmabsim simulate CONFIG [--runs N] [--horizon H] [--seed S] [--out DIR]
    rmabsim scenario NAME   [--runs N] [--horizon H] [--seed S] [--out DIR]
    rmabsim gaps CONFIG     [--horizon H] [--out DIR]

Exit status: 0 on success, 2 for configuration errors, 3 for I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, parse_config
from .env import DegenerateChainError
from .report import emit_gap_report, run_scenario
from .scenarios import SCENARIOS, get_scenario

EXIT_CONFIG = 2
EXIT_IO = 3

log = logging.getLogger("rmabsim")


def _common(p: argparse.ArgumentParser, sim: bool = True) -> None:
    p.add_argument("--horizon", type=int, help="override the number of decisions per run")
    p.add_argument("--out", type=Path, help="output directory")
    if sim:
        p.add_argument("--runs", type=int, help="override the number of independent runs")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--workers", type=int, default=1, help="threads running episodes (default 1)")
        p.add_argument("--no-plot", action="store_true", help="skip PNG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmabsim", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a configuration file")
    p.add_argument("config", type=Path)
    _common(p)

    p = sub.add_parser("scenario", help="run a built-in preset")
    p.add_argument("name", choices=sorted(SCENARIOS))
    _common(p)

    p = sub.add_parser("gaps", help="print per-band means, gaps and count bounds")
    p.add_argument("config", type=Path)
    _common(p, sim=False)
    return parser


def _load(path: Path):
    return parse_config(path.read_text())


def _checked_overrides(args: argparse.Namespace) -> None:
    for name in ("runs", "horizon"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise ConfigError(f"--{name}: {v} must be >= 1")
    seed = getattr(args, "seed", None)
    if seed is not None and not 0 <= seed < 2**64:
        raise ConfigError(f"--seed: {seed} must be an unsigned 64-bit integer")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        _checked_overrides(args)
        if args.command == "gaps":
            cfg = _load(args.config)
            if args.horizon is not None:
                cfg = replace(cfg, horizon=args.horizon)
            text = emit_gap_report(cfg)
            sys.stdout.write(text)
            if args.out is not None:
                args.out.mkdir(parents=True, exist_ok=True)
                (args.out / "gaps.csv").write_text(text)
            return 0

        target = _load(args.config) if args.command == "simulate" else get_scenario(args.name)
        out = args.out or Path("results") / (args.name if args.command == "scenario" else args.config.stem)
        written = run_scenario(
            target, out, runs=args.runs, horizon=args.horizon, seed=args.seed,
            plot=not args.no_plot, workers=args.workers,
        )
        for path in written:
            print(path)
        return 0
    except (ConfigError, DegenerateChainError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
