#!/usr/bin/env python3
"""Regime atlas over the (a, b) plane: which capacity result applies where.

    python scripts/regime_atlas.py --p 10 --resolution 81 --out atlas.csv
    python scripts/regime_atlas.py --p 10 --mode gap --resolution 21
"""

import argparse

from gcifc import verify


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=float, default=10.0)
    ap.add_argument("--resolution", type=int, default=81)
    ap.add_argument("--mode", choices=("regime", "gap"), default="regime")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cells = verify.atlas(resolution=args.resolution, p1=args.p, p2=args.p,
                         mode=args.mode)
    text = verify.ATLAS_CSV_HEADER + "\n" + \
        "\n".join(c.csv_row() for c in cells) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")

    by_label = {}
    for c in cells:
        by_label[c.label] = by_label.get(c.label, 0) + 1
    for label, n in sorted(by_label.items()):
        print(f"# {label}: {n} cells")


if __name__ == "__main__":
    main()
