"""``gwf <experiment> [--config FILE] [--out DIR] ...``

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import EXPERIMENTS, ConfigError, ExperimentConfig, NumericalError, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gwf", description="Reproduce the Gutzwiller-state tables and figures.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="YAML file with ExperimentConfig fields")
    p.add_argument("--out", default=None, help="output directory (default: out/<experiment>)")
    p.add_argument("--connectivity", choices=("linear", "all-to-all"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--allow-large", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    overrides = {
        "out_dir": args.out,
        "connectivity": args.connectivity,
        "seed": args.seed,
        "workers": args.workers,
        "allow_large": args.allow_large,
    }
    try:
        if args.config:
            cfg = ExperimentConfig.from_file(args.config, args.experiment, **overrides)
        else:
            cfg = ExperimentConfig.for_experiment(args.experiment, **overrides)
    except ConfigError as exc:
        print(f"gwf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        files = run_experiment(cfg)
    except ConfigError as exc:
        print(f"gwf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"gwf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for f in files:
        print(f)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
