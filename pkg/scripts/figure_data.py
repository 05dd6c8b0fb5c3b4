#!/usr/bin/env python3
"""Write the ACV, periodogram and DFA figure columns for one or more Hurst values."""

import argparse
from pathlib import Path

from lmround.harness import figure_data
from lmround.harness.figures import FigureKind, default_process
from lmround.harness.io import write_columns
from lmround.synth import SeedSpec


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hurst", type=float, nargs="+", default=[0.7, 0.85])
    parser.add_argument("--n", type=int, default=1 << 14)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="figures")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for h in args.hurst:
        for kind in FigureKind:
            cols = figure_data(kind, default_process(h), SeedSpec(args.seed), args.n)
            path = out / f"{kind.value}_H{h}.csv"
            write_columns(cols, path)
            print(path)


if __name__ == "__main__":
    main()
