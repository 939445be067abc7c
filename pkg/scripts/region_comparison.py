#!/usr/bin/env python3
"""Boundary tables for a set of bounds/schemes at one channel, as CSVs
plus a gnuplot script. Wraps the CLI region command.

    python scripts/region_comparison.py --a 2 --b 3 --p1 1 --p2 1 \
        --ids d,e:costa1,f,outer:best --out fig
"""

import argparse
import sys

from gcifc.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", required=True)
    ap.add_argument("--b", required=True)
    ap.add_argument("--p1", required=True)
    ap.add_argument("--p2", required=True)
    ap.add_argument("--ids", default="b,d,e:sweep,tdma,outer:best")
    ap.add_argument("--out", default="region")
    args = ap.parse_args()

    code = cli_main(["region", "--a", args.a, "--b", args.b,
                     "--p1", args.p1, "--p2", args.p2,
                     "--ids", args.ids, "--out", args.out, "--gnuplot"])
    if code == 0:
        print(f"# wrote {args.out}_<id>.csv and {args.out}.gp")
    sys.exit(code)


if __name__ == "__main__":
    main()
