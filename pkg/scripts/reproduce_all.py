"""Run every experiment with default settings into out/<experiment>/.

    python scripts/reproduce_all.py [--out OUT] [--only fig1b table1 ...]

The full set takes several minutes on one core; N=12 points dominate.
"""

import argparse
import sys
import time
from pathlib import Path

from gwf.cli import main as gwf_main
from gwf.experiments import EXPERIMENTS


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="out")
    p.add_argument("--only", nargs="+", choices=EXPERIMENTS, default=list(EXPERIMENTS))
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    status = 0
    for exp in args.only:
        t0 = time.perf_counter()
        rc = gwf_main([exp, "--out", str(Path(args.out) / exp), "--workers", str(args.workers)])
        print(f"[{exp}] exit {rc} in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        status = status or rc
    return status


if __name__ == "__main__":
    sys.exit(main())
