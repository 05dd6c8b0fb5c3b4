#!/usr/bin/env python3
"""Run the acceptance suite and print its per-criterion summary.

    python3 scripts/acceptance.py            # full scale, L = 1000
    python3 scripts/acceptance.py --smoke    # L = 100, bands widened threefold
"""

import argparse
import os
import sys
from pathlib import Path

import pytest


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--smoke", action="store_true", help="100 replicates instead of 1000")
    parser.add_argument("--replicates", type=int, default=None)
    args = parser.parse_args()
    reps = args.replicates or (100 if args.smoke else 1000)
    os.environ["LMROUND_ACCEPT_REPLICATES"] = str(reps)
    tests = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    return pytest.main([str(tests), "-q", "-rxX"])


if __name__ == "__main__":
    sys.exit(main())
