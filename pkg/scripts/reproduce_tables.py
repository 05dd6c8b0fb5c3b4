#!/usr/bin/env python3
"""Rerun the four estimation tables and write one CSV per table.

    python3 scripts/reproduce_tables.py --replicates 1000 --out results/
"""

import argparse
import os
import time
from pathlib import Path

from lmround.harness import emit_table, run_experiment, table_config
from lmround.harness.tables import TABLE_LENGTHS, TABLES


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--replicates", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--n", type=int, nargs="+", default=list(TABLE_LENGTHS))
    parser.add_argument("--tables", nargs="+", default=sorted(TABLES), choices=sorted(TABLES))
    parser.add_argument("--out", default="results")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.tables:
        t0 = time.perf_counter()
        cfg = table_config(name, args.n, args.replicates, args.seed, args.workers)
        rows = run_experiment(cfg)
        emit_table(rows, out / f"{name}.csv")
        print(f"{name}: {len(rows)} rows in {time.perf_counter() - t0:.1f} s -> {out / (name + '.csv')}")


if __name__ == "__main__":
    main()
