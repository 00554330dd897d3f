"""Order-M local expansion of convolution powers and its empirical checks.

For a plan built from a normalized sequence with finitely many tangency points,
:func:`approximate` evaluates

    sum_k sum_{m=0}^M kappa_k^{-l} F(kappa_k)^n n^{-(m+1)/(2mu_k)}
        (P_{k,m}(-d/dx) H^{beta_k}_{2mu_k})((l - alpha_k n) / n^{1/(2mu_k)})

and the remaining functions compare it with exact powers: remainders, log-log
decay fits, generalized Gaussian envelopes, and the l^p error against an initial
datum.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .attractors import AttractorSpec, applied_attractor
from .errors import DegenerateData, PlanIncomplete
from .polynomials import ExpansionPolynomial, build_polynomials
from .sequence import INFINITY, Sequence, convolve_arrays, lp_norm, powers
from .symbol import Alternative, SymbolReport, TangencyPoint, analyze, unit_from_turns

ENVELOPE_SLACK = 0.05
ENVELOPE_C = 0.09
ENVELOPE_c = 0.225


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get("CONVPOW_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ExpansionPlan:
    sequence: Sequence
    report: SymbolReport
    polynomials: tuple
    M: int

    def __post_init__(self):
        if self.report.alternative is not Alternative.FINITE_TANGENCY or not self.report.points:
            raise PlanIncomplete("plan needs a FINITE_TANGENCY report with classified points")
        if len(self.polynomials) != len(self.report.points):
            raise PlanIncomplete("one polynomial list per tangency point is required")
        for pt, polys in zip(self.report.points, self.polynomials):
            if len(polys) != self.M + 1:
                raise PlanIncomplete(f"expected P_0..P_{self.M} for every point")
            need = range(2 * pt.mu + 1, 2 * pt.mu + self.M + 1)
            if any(nu not in pt.cumulants for nu in need):
                raise PlanIncomplete("cumulants do not reach 2 mu + M")

    @property
    def points(self) -> tuple:
        return self.report.points

    @property
    def mu_max(self) -> int:
        return max(p.mu for p in self.points)

    def terms(self):
        """Yield ``(k, m, point, P, evaluator)`` for every nonzero term."""
        for k, (pt, polys) in enumerate(zip(self.points, self.polynomials)):
            spec = AttractorSpec(pt.mu, pt.beta)
            for m, P in enumerate(polys):
                if not P.is_zero:
                    yield k, m, pt, P, applied_attractor(spec, P)


def build_plan(a: Sequence, M: int = 3, normalize: bool = False) -> ExpansionPlan:
    a, report = analyze(a, M, normalize=normalize)
    polys = tuple(tuple(build_polynomials(pt, M, k)) for k, pt in enumerate(report.points))
    return ExpansionPlan(a, report, polys, M)


# evaluation -------------------------------------------------------------


def phase_factor(point: TangencyPoint, n: int, ells: np.ndarray) -> np.ndarray:
    """``kappa^{-l} F(kappa)^n`` from the angle ``-l arg(kappa) + n arg F(kappa)``.

    When both angles are rational multiples of pi the reduction is done in
    integers; otherwise the angle is accumulated in extended precision.
    """
    ells = np.asarray(ells, dtype=np.int64)
    if point.theta_pi is not None and point.value_pi is not None:
        tp, vp = Fraction(point.theta_pi), Fraction(point.value_pi)
        den = math.lcm(tp.denominator, vp.denominator)
        a = tp.numerator * (den // tp.denominator)
        b = vp.numerator * (den // vp.denominator)
        k = (-ells * a + n * b) % (2 * den)
        table = np.array([unit_from_turns(Fraction(j, den)) for j in range(2 * den)])
        return table[k]
    two_pi = 2 * np.pi
    ang = -ells.astype(np.longdouble) * np.longdouble(point.theta) + np.longdouble(n) * np.longdouble(point.value_arg)
    ang = np.fmod(ang, np.longdouble(two_pi)).astype(np.float64)
    return np.exp(1j * ang)


def scaled_position(point: TangencyPoint, n: int, ells) -> np.ndarray:
    """``x_k = (l - alpha_k n) / n^{1/(2 mu_k)}``."""
    return (np.asarray(ells, dtype=np.float64) - point.alpha * n) / n ** (1.0 / (2 * point.mu))


def approximate(plan: ExpansionPlan, n: int, ells) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    ells = np.asarray(ells, dtype=np.int64)
    out = np.zeros(ells.shape, dtype=np.complex128)
    by_point: dict = {}
    for k, m, pt, P, ev in plan.terms():
        x = scaled_position(pt, n, ells)
        weight = n ** (-(m + 1) / (2 * pt.mu))
        by_point[k] = by_point.get(k, 0) + weight * ev(x)
    for k, total in sorted(by_point.items()):
        out += phase_factor(plan.points[k], n, ells) * total
    return out


def evaluation_window(plan: ExpansionPlan, n: int) -> tuple[int, int]:
    """Index range covering the exact support of ``a^{*n}`` and every ``l`` where
    some expansion term can exceed 1e-16."""
    lo, hi = n * plan.sequence.offset, n * plan.sequence.last
    for _, _, pt, _, ev in plan.terms():
        if ev.x_max == 0:
            continue
        c, r = pt.alpha * n, ev.x_max * n ** (1.0 / (2 * pt.mu))
        lo, hi = min(lo, math.floor(c - r)), max(hi, math.ceil(c + r))
    return lo, hi


@dataclass(frozen=True, eq=False)
class ExpansionResult:
    n: int
    lo: int
    exact: np.ndarray
    approx: np.ndarray
    remainder: np.ndarray
    linf: float
    l1: float

    @property
    def ells(self) -> np.ndarray:
        return np.arange(self.lo, self.lo + self.remainder.size)

    def norm(self, p: float) -> float:
        return lp_norm(self.remainder, p)


def remainder(plan: ExpansionPlan, n: int, exact: Sequence | None = None) -> ExpansionResult:
    """``R^n_l = a^{*n}_l - approx_l`` over :func:`evaluation_window`."""
    if exact is None:
        exact = dict(powers(plan.sequence, [n]))[n]
    lo, hi = evaluation_window(plan, n)
    ells = np.arange(lo, hi + 1)
    ex = exact.window(lo, hi)
    ap = approximate(plan, n, ells)
    rem = ex - ap
    return ExpansionResult(n, lo, ex, ap, rem, lp_norm(rem, INFINITY), lp_norm(rem, 1))


def remainders(plan: ExpansionPlan, ns, workers: int | None = None) -> list[ExpansionResult]:
    """Remainders for every n in ``ns`` (sorted, deduplicated).

    Exact powers come from one sweep of repeated multiplication by the stencil;
    the per-n approximations may run in a thread pool.
    """
    exacts = list(powers(plan.sequence, ns))
    w = _workers(workers)
    if w == 1:
        return [remainder(plan, n, ex) for n, ex in exacts]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(lambda item: remainder(plan, item[0], item[1]), exacts))


# slopes ---------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    ns: tuple
    values: tuple
    slope: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "ns": list(self.ns),
            "values": list(self.values),
        }


def default_n_list(count: int = 40, n_max: int = 1000, n_min: int = 1) -> list[int]:
    """``count`` distinct integers, log-spaced in ``[n_min, n_max]``."""
    if n_max - n_min + 1 < count:
        return list(range(n_min, n_max + 1))
    raw = count
    while True:
        ns = sorted(set(np.unique(np.round(np.geomspace(n_min, n_max, raw)).astype(int)).tolist()))
        if len(ns) >= count:
            return ns
        raw += 1


def fit_loglog(ns, values) -> SlopeFit:
    """Least-squares line through ``(log10 n, log10 value)``; zero values are dropped."""
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ns.size > 1 and np.any(np.diff(ns) <= 0):
        raise ValueError("ns must be strictly increasing")
    keep = values > 0
    if np.count_nonzero(keep) < 3:
        raise DegenerateData("fewer than 3 nonzero values to fit")
    lx, ly = np.log10(ns[keep]), np.log10(values[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / tot if tot > 0 else 1.0
    return SlopeFit(tuple(int(n) for n in ns), tuple(float(v) for v in values), float(slope), float(intercept), float(r2))


def _check_n_list(ns) -> list[int]:
    ns = sorted(set(int(n) for n in ns))
    if len(ns) < 8 or math.log10(ns[-1] / ns[0]) < 1.5:
        raise ValueError("slope fits need at least 8 values of n spanning 1.5 decades")
    return ns


def fit_slope(plan: ExpansionPlan, n_list=None, p: float = INFINITY, n_min: int | None = None,
              results: list[ExpansionResult] | None = None) -> SlopeFit:
    """Decay rate of ``||R^n||_p`` in n; ``n_min`` drops the pre-asymptotic range."""
    if results is None:
        ns = _check_n_list(default_n_list() if n_list is None else n_list)
        results = remainders(plan, ns)
    if n_min is not None:
        results = [r for r in results if r.n >= n_min]
    return fit_loglog([r.n for r in results], [r.norm(p) for r in results])


# envelopes -----------------------------------------------------------------


def log_envelope(plan: ExpansionPlan, n: int, ells, C: float, c: float) -> np.ndarray:
    """log of ``max_k C n^{-(M+2)/(2mu_k)} exp(-c |x_k|^{2mu_k/(2mu_k-1)})``."""
    out = np.full(np.shape(ells), -np.inf)
    for pt in plan.points:
        x = np.abs(scaled_position(pt, n, ells))
        q = AttractorSpec(pt.mu, pt.beta).tail_exponent
        val = math.log(C) - (plan.M + 2) / (2 * pt.mu) * math.log(n) - c * x**q
        out = np.maximum(out, val)
    return out


@dataclass(frozen=True)
class EnvelopeCheck:
    C: float
    c: float
    ns: tuple
    ratios: tuple
    worst_ell: tuple
    slack: float = ENVELOPE_SLACK

    @property
    def passed(self) -> bool:
        return all(r <= 1 + self.slack for r in self.ratios)

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "c": self.c,
            "slack": self.slack,
            "pass": self.passed,
            "per_n": [
                {"n": n, "max_ratio": r, "worst_ell": l} for n, r, l in zip(self.ns, self.ratios, self.worst_ell)
            ],
        }


def envelope_ratio(plan: ExpansionPlan, res: ExpansionResult, C: float, c: float) -> tuple[float, int]:
    """Largest ``|R^n_l| / envelope_l`` over the window, computed in log space."""
    mod = np.abs(res.remainder)
    nz = mod > 0
    if not np.any(nz):
        return 0.0, int(res.lo)
    ells = res.ells[nz]
    logr = np.log(mod[nz]) - log_envelope(plan, res.n, ells, C, c)
    i = int(np.argmax(logr))
    return float(np.exp(min(logr[i], 700.0))), int(ells[i])


def check_envelope(plan: ExpansionPlan, n_list, C: float = ENVELOPE_C, c: float = ENVELOPE_c,
                   slack: float = ENVELOPE_SLACK) -> EnvelopeCheck:
    results = remainders(plan, n_list)
    pairs = [envelope_ratio(plan, r, C, c) for r in results]
    return EnvelopeCheck(C, c, tuple(r.n for r in results), tuple(p[0] for p in pairs),
                         tuple(p[1] for p in pairs), slack)


# initial data ---------------------------------------------------------------


def corollary1_error(plan: ExpansionPlan, u0: Sequence, n_list=None, p: float = INFINITY,
                     results: list[ExpansionResult] | None = None) -> SlopeFit:
    """Decay of ``||a^{*n} * u0 - approx * u0||_p``, i.e. ``||R^n * u0||_p`` by linearity."""
    if results is None:
        ns = _check_n_list(default_n_list() if n_list is None else n_list)
        results = remainders(plan, ns)
    errs = [lp_norm(convolve_arrays(r.remainder, u0.coeffs), p) for r in results]
    return fit_loglog([r.n for r in results], errs)
