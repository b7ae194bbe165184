"""Regenerate plot data for all four figures at their default settings.

Usage: python scripts/figure_data.py [--out DIR] [--samples K] [--seed S]

Each figure is written to DIR/figN/ through the CLI, so the outputs carry
the usual manifest. The full defaults (1000 samples at N = 100) take a few
minutes on one core; pass --samples to shorten a trial run.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hetou.cli import main as hetou_main


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("figure-data"))
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    for which in (1, 2, 3, 4):
        argv = ["figures", str(which), "--out", str(args.out / f"fig{which}"), "--seed", str(args.seed)]
        if args.samples is not None:
            argv += ["--samples", str(args.samples)]
        code = hetou_main(argv)
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
