"""Histogram of the slacks in the global-cost bound chain over random specs.

Reads ``bound_slacks.csv`` written by ``qxent run configs/qae.json`` and
prints quantiles of each consecutive gap in the chain.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

LINKS = [("delta_S", "l_otm"), ("s_eta", "delta_S"), ("ln_dF", "s_eta"), ("ub_cost", "ln_dF")]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", type=Path, nargs="?", default=Path("results/qae/bound_slacks.csv"))
    args = ap.parse_args(argv)
    with args.csv.open() as f:
        rows = list(csv.DictReader(f))
    if not rows:
        print("no rows", file=sys.stderr)
        return 1
    print(f"{'link':<22}{'min':>12}{'median':>12}{'max':>12}")
    for hi, lo in LINKS:
        gap = np.array([float(r[hi]) - float(r[lo]) for r in rows])
        print(f"{hi + ' - ' + lo:<22}{gap.min():>12.3e}{np.median(gap):>12.3e}{gap.max():>12.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
