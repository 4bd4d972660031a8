"""Command-line entry point: fluid-mimo <convergence|snr|region> ...

Exit codes: 0 on success, 1 for configuration errors, 2 when a per-run
invariant fails. No CSV is written unless the whole run succeeds.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import EXPERIMENTS, ConfigError, parse_config
from .experiments import ExperimentError, run_experiment, write_csv

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluid-mimo",
        description=(
            "Rate-maximization experiments for fluid-antenna MIMO systems "
            "with statistical channel knowledge"
        ),
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, help_text in (
        ("convergence", "optimizer objective trace per power budget"),
        ("snr", "trial-averaged rate versus SNR for each design"),
        ("region", "trial-averaged rate versus normalized region size"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, default=None, help="override the base seed")
        p.add_argument(
            "--trials", type=int, default=None, help="override the number of angle trials"
        )
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    assert args.experiment in EXPERIMENTS
    try:
        spec = parse_config(args.config, args.experiment)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be >= 0")
            spec = replace(spec, base_seed=args.seed)
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("--trials must be >= 1")
            spec = replace(spec, num_angle_trials=args.trials)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        header, rows = run_experiment(spec, jobs=args.jobs)
        write_csv(args.out, header, rows)
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
