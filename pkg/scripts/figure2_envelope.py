"""Scaled remainder profiles n^{(M+2)/(2mu)} |R^n_l| against the generalized-Gaussian envelope."""

import argparse
import csv

import numpy as np

from convpow import catalog
from convpow.engine import ENVELOPE_C, ENVELOPE_c, build_plan, envelope_ratio, log_envelope, remainders


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.5)
    ap.add_argument("-M", type=int, default=3)
    ap.add_argument("--ns", type=int, nargs="+", default=[100, 400, 1000])
    ap.add_argument("--C", type=float, default=ENVELOPE_C)
    ap.add_argument("--c", type=float, default=ENVELOPE_c)
    ap.add_argument("--out", default="figure2.csv")
    args = ap.parse_args()

    plan = build_plan(catalog.o3(args.lam), args.M)
    pt = plan.points[0]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "ell", "x", "scaled_abs_remainder", "scaled_envelope"])
        for r in remainders(plan, args.ns):
            scale = r.n ** ((plan.M + 2) / (2 * pt.mu))
            x = (r.ells - pt.alpha * r.n) / r.n ** (1 / (2 * pt.mu))
            env = np.exp(log_envelope(plan, r.n, r.ells, args.C, args.c)) * scale
            for row in zip(r.ells, x, scale * np.abs(r.remainder), env):
                w.writerow([r.n, int(row[0]), *(repr(float(v)) for v in row[1:])])
            ratio, ell = envelope_ratio(plan, r, args.C, args.c)
            print(f"n={r.n:5d}  max ratio {ratio:.4f} at l={ell}")


if __name__ == "__main__":
    main()
