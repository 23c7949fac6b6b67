#!/usr/bin/env python3
"""Dimension sweep of the random-instance benchmark (CSV on stdout).

Thin wrapper over `lngm bench` with the sweep used for the timing table:
eigendecomposition time, bisection time, and iteration counts (per call and
per instance), averaged over `--count` instances per dimension.

    python scripts/bench_table.py --count 100 --max-n 1000
"""
import argparse
import sys

from lngm.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--eps", type=float, default=1e-5)
    ap.add_argument("--max-n", type=int, default=1000)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    dims = [n for n in (100, 200, 300, 400, 500, 600, 700, 800, 900, 1000,
                        2000, 3000, 4000, 5000) if n <= args.max_n]
    return cli_main(["bench", "--n", ",".join(map(str, dims)),
                     "--count", str(args.count), "--seed", str(args.seed),
                     "--eps", str(args.eps), "--jobs", str(args.jobs)])


if __name__ == "__main__":
    sys.exit(main())
