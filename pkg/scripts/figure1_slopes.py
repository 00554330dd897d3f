"""Remainder decay for O3 at M=3: l^inf and l^1 norms over log-spaced n, plus fitted slopes."""

import argparse
import csv
import json

from convpow import catalog
from convpow.engine import build_plan, default_n_list, fit_loglog, remainders


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.5)
    ap.add_argument("-M", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=1000)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--out", default="figure1.csv")
    args = ap.parse_args()

    plan = build_plan(catalog.o3(args.lam), args.M)
    ns = default_n_list(args.count, args.n_max)
    results = remainders(plan, ns)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "linf", "l1"])
        for r in results:
            w.writerow([r.n, repr(r.linf), repr(r.l1)])
    fits = {
        "linf": fit_loglog(ns, [r.linf for r in results]).slope,
        "l1": fit_loglog(ns, [r.l1 for r in results]).slope,
    }
    print(json.dumps({"out": args.out, "slopes": fits}, indent=2))


if __name__ == "__main__":
    main()
