"""Sweep every figure preset into its own output directory."""

import argparse
import sys
from pathlib import Path

from ep_lab.cli import main
from ep_lab.scenario import PRESETS


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-o", "--output", default="figures", help="parent output directory")
    p.add_argument("--grid", type=int, default=None, help="override the grid count")
    p.add_argument("--gnuplot", action="store_true", help="emit gnuplot data+script instead of SVG")
    return p.parse_args(argv)


def run(args) -> int:
    for name in sorted(PRESETS):
        argv = ["sweep", "--preset", name, "-o", str(Path(args.output) / name)]
        if args.grid:
            argv += ["--grid", str(args.grid)]
        if args.gnuplot:
            argv.append("--gnuplot")
        code = main(argv)
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run(parse_args()))
