"""Error of the expansion applied to box initial data, in l^1 and l^inf, over two n ranges."""

import argparse
import csv
import json

import numpy as np

from convpow import catalog
from convpow.engine import build_plan, default_n_list, fit_loglog, remainder, remainders
from convpow.sequence import INFINITY, convolve_arrays, lp_norm, power


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=5, help="box width of the initial data")
    ap.add_argument("-M", type=int, default=3)
    ap.add_argument("--large", type=int, nargs="*", default=[1000, 2000, 4000, 8000, 16000, 32000])
    ap.add_argument("--out", default="corollary1.csv")
    args = ap.parse_args()

    plan = build_plan(catalog.o3(0.5), args.M)
    box = np.ones(args.width)
    small = remainders(plan, default_n_list(40, 1000))
    large = [remainder(plan, n, power(plan.sequence, n)) for n in args.large]
    rows = []
    for r in small + large:
        c = convolve_arrays(r.remainder, box)
        rows.append((r.n, lp_norm(c, 1), lp_norm(c, INFINITY), r.l1))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "err_l1", "err_linf", "remainder_l1"])
        w.writerows((n, repr(a), repr(b), repr(c)) for n, a, b, c in rows)

    def slopes(sel):
        ns = [r[0] for r in sel]
        return {"l1": fit_loglog(ns, [r[1] for r in sel]).slope, "linf": fit_loglog(ns, [r[2] for r in sel]).slope}

    print(json.dumps({"n<=1000": slopes(rows[: len(small)]), "large n": slopes(rows[len(small):])}, indent=2))


if __name__ == "__main__":
    main()
