"""Command-line front end: ``convpow {analyze,expand,verify,convolve}``.

Exit codes: 0 success, 1 internal or I/O error, 2 assumption violation,
3 verification failure.  Errors are reported as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .attractors import AttractorSpec, eval_applied
from .engine import (
    ENVELOPE_C,
    ENVELOPE_c,
    build_plan,
    check_envelope,
    default_n_list,
    envelope_ratio,
    fit_loglog,
    log_envelope,
    remainder,
    remainders,
)
from .errors import AssumptionViolation, ConvPowError
from .polynomials import build_polynomials
from .sequence import Sequence, convolve, power
from .symbol import Alternative, analyze, find_tangency_points
from .verification import SUITES, run_suite

EXIT_OK, EXIT_ERROR, EXIT_ASSUMPTION, EXIT_VERIFY = 0, 1, 2, 3


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _fail(err: dict, code: int) -> int:
    print(json.dumps(err), file=sys.stderr)
    return code


def _add_scheme_args(p: argparse.ArgumentParser):
    p.add_argument("--scheme", choices=catalog.SCHEMES, default="o3")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5, help="CFL number for o3 / lax-friedrichs")
    p.add_argument("--p", dest="prob", type=float, default=0.5, help="success probability for bernoulli")
    p.add_argument("--file", dest="path", help="sequence JSON for --scheme file")
    p.add_argument("--normalize", action="store_true", help="rescale so that sup |F_a| = 1")


def _sequence(args) -> Sequence:
    return catalog.resolve(args.scheme, lam=args.lam, p=args.prob, path=args.path)


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


# subcommands ------------------------------------------------------------------


def cmd_analyze(args) -> int:
    a = _sequence(args)
    report = find_tangency_points(a, check=False)
    if not report.normalized and not args.normalize:
        print(_dump(report.to_dict()))
        return _fail(
            {"error": "NotNormalized", "sup_modulus": report.sup_modulus, "factor": 1 / report.sup_modulus},
            EXIT_ASSUMPTION,
        )
    if report.alternative is Alternative.ALL_MODULUS_ONE:
        print(_dump(report.to_dict()))
        return _fail({"error": "ALL_MODULUS_ONE", "alternative": "ALL_MODULUS_ONE"}, EXIT_ASSUMPTION)
    a, report = analyze(a, args.order, normalize=args.normalize)
    out = report.to_dict()
    for k, (pd, pt) in enumerate(zip(out["points"], report.points)):
        pd["polynomials"] = [P.to_dict() for P in build_polynomials(pt, args.order, k)]
    print(_dump(out))
    return EXIT_OK


def cmd_expand(args) -> int:
    plan = build_plan(_sequence(args), args.M, normalize=args.normalize)
    prefix = Path(args.out) if args.out else None
    res = remainder(plan, args.n)
    ratio, worst = envelope_ratio(plan, res, args.C, args.c)
    summary = {
        "n": args.n,
        "M": args.M,
        "K": len(plan.points),
        "window": [int(res.lo), int(res.lo + res.remainder.size - 1)],
        "linf": res.linf,
        "l1": res.l1,
        "envelope": {"C": args.C, "c": args.c, "max_ratio": ratio, "worst_ell": worst},
        "terms": [{"k": k, "m": m, "x_max": ev.x_max} for k, m, _, _, ev in plan.terms()],
    }
    if prefix is not None:
        env = np.exp(log_envelope(plan, args.n, res.ells, args.C, args.c))
        _write_csv(
            prefix.with_name(prefix.name + "_profile.csv"),
            ["ell", "exact_re", "exact_im", "approx_re", "approx_im", "remainder_abs", "envelope"],
            (
                (int(l), e.real, e.imag, p.real, p.imag, abs(r), v)
                for l, e, p, r, v in zip(res.ells, res.exact, res.approx, res.remainder, env)
            ),
        )
    if args.slopes:
        ns = default_n_list(args.n_count, args.n_max)
        results = remainders(plan, ns)
        linf = [r.linf for r in results]
        l1 = [r.l1 for r in results]
        summary["slopes"] = {"linf": fit_loglog(ns, linf).to_dict(), "l1": fit_loglog(ns, l1).to_dict()}
        if prefix is not None:
            _write_csv(prefix.with_name(prefix.name + "_slopes.csv"), ["n", "linf", "l1"], zip(ns, linf, l1))
    if args.attractor_profile and prefix is not None:
        for k, (pt, polys) in enumerate(zip(plan.points, plan.polynomials)):
            spec = AttractorSpec(pt.mu, pt.beta)
            x = np.linspace(-args.x_range, args.x_range, 801)
            h = eval_applied(spec, polys[0], x)
            _write_csv(prefix.with_name(f"{prefix.name}_attractor{k}.csv"), ["x", "re", "im"],
                       zip(x, h.real, h.imag))
    if args.envelope_ns:
        ec = check_envelope(plan, args.envelope_ns, args.C, args.c)
        summary["envelope_check"] = ec.to_dict()
    text = _dump(summary)
    if prefix is not None:
        prefix.with_name(prefix.name + "_summary.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    verdicts = [run_suite(name) for name in names]
    print(_dump(verdicts[0] if len(verdicts) == 1 else verdicts))
    return EXIT_OK if all(v["pass"] for v in verdicts) else EXIT_VERIFY


def cmd_convolve(args) -> int:
    seqs = [Sequence.load(p) for p in args.files]
    if args.power is not None:
        if len(seqs) != 1:
            return _fail({"error": "usage", "message": "--power takes exactly one --file"}, EXIT_ERROR)
        out = power(seqs[0], args.power)
    else:
        if len(seqs) != 2:
            return _fail({"error": "usage", "message": "convolve needs two --file arguments"}, EXIT_ERROR)
        out = convolve(seqs[0], seqs[1])
    print(json.dumps(out.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convpow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="symbol analysis report as JSON")
    _add_scheme_args(p)
    p.add_argument("--order", type=int, default=3, help="expansion order M")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("expand", help="order-M expansion versus the exact power")
    _add_scheme_args(p)
    p.add_argument("-M", type=int, default=3)
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--out", help="output prefix for CSV/JSON files")
    p.add_argument("--C", type=float, default=ENVELOPE_C)
    p.add_argument("--c", type=float, default=ENVELOPE_c)
    p.add_argument("--slopes", action="store_true", help="also fit l^inf / l^1 decay over a log-spaced n list")
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--n-count", type=int, default=40)
    p.add_argument("--envelope-ns", type=int, nargs="*", help="run the envelope check at these n")
    p.add_argument("--attractor-profile", action="store_true", help="dump H(x) as CSV")
    p.add_argument("--x-range", type=float, default=20.0)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=[*SUITES, "all"], required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convolve", help="convolution or convolution power of JSON sequences")
    p.add_argument("--file", dest="files", action="append", required=True)
    p.add_argument("--power", type=int)
    p.set_defaults(func=cmd_convolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        return _fail({"error": "usage", "message": "n must be >= 1"}, EXIT_ERROR)
    if getattr(args, "power", None) is not None and args.power < 1:
        return _fail({"error": "usage", "message": "--power must be >= 1"}, EXIT_ERROR)
    try:
        return args.func(args)
    except AssumptionViolation as exc:
        return _fail(exc.to_dict(), EXIT_ASSUMPTION)
    except (ConvPowError, OSError, ValueError) as exc:
        return _fail({"error": type(exc).__name__, "message": str(exc)}, EXIT_ERROR)
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostic, still one JSON line
        return _fail({"error": "internal", "message": f"{type(exc).__name__}: {exc}"}, EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
