"""Named verification suites run by ``convpow verify``.

Each suite returns a list of :class:`Check` records; a suite passes when every
check does.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import catalog
from .attractors import AttractorSpec, eval_attractor, gaussian_attractor
from .engine import (
    ENVELOPE_C,
    ENVELOPE_c,
    build_plan,
    check_envelope,
    corollary1_error,
    default_n_list,
    fit_slope,
    remainder,
    remainders,
)
from .polynomials import bell_sum_polynomial, build_polynomials, generating_coefficient
from .sequence import INFINITY, Sequence, power
from .symbol import TangencyPoint, analyze


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "seconds": round(self.seconds, 4), **self.detail}


def _timed(name, fn) -> Check:
    t0 = time.perf_counter()
    passed, detail = fn()
    return Check(name, bool(passed), detail, time.perf_counter() - t0)


def o3_cumulants_closed_form(lam: float) -> dict:
    base = lam * (2 - lam) * (1 - lam**2)
    return {
        5: -2 * base * (1 - 2 * lam),
        6: -5 * base * (1 - 2 * lam + 2 * lam**2),
        7: -10 * base * (1 - 2 * lam) * (1 - lam + lam**2),
    }


def _rel(a, b):
    return abs(a - b) / abs(b)


# suites ---------------------------------------------------------------------


def suite_o3_figures() -> list[Check]:
    checks = []

    def classification():
        _, rep = analyze(catalog.o3(0.5), 3)
        pt = rep.points[0]
        P = build_polynomials(pt, 3)
        g = pt.cumulants
        ok = (
            len(rep.points) == 1
            and abs(pt.alpha - 0.5) < 1e-9
            and pt.mu == 2
            and abs(pt.beta - 3 / 128) < 1e-9
            and abs(g[5]) < 1e-9
            and abs(g[7]) < 1e-9
            and _rel(g[6], -45 / 32) < 1e-9
            and max((abs(c) for c in P[1].coeffs.values()), default=0.0) < 1e-12
            and max((abs(c) for c in P[3].coeffs.values()), default=0.0) < 1e-12
            and abs(P[2].coeffs.get(6, 0) + 1 / 512) < 1e-12
            and all(abs(c) < 1e-12 for d, c in P[2].coeffs.items() if d != 6)
        )
        return ok, {"alpha": pt.alpha, "mu": pt.mu, "beta": [pt.beta.real, pt.beta.imag],
                    "gamma6": g[6].real}

    checks.append(_timed("o3-classification", classification))

    def general_lambda():
        worst = 0.0
        for lam in (0.25, 0.75):
            _, rep = analyze(catalog.o3(lam), 3)
            want = o3_cumulants_closed_form(lam)
            for nu, v in want.items():
                worst = max(worst, _rel(rep.points[0].cumulants[nu], v))
        return worst < 1e-9, {"max_rel_err": worst}

    checks.append(_timed("o3-general-lambda-cumulants", general_lambda))

    plan = build_plan(catalog.o3(0.5), 3)
    ns = default_n_list(40, 1000)
    results = remainders(plan, ns)

    def slopes():
        linf = fit_slope(plan, p=INFINITY, results=results).slope
        l1 = fit_slope(plan, p=1, results=results).slope
        return -1.32 <= linf <= -1.20 and -1.05 <= l1 <= -0.95, {"linf_slope": linf, "l1_slope": l1, "points": len(ns)}

    checks.append(_timed("figure1-slopes", slopes))

    def envelope():
        ec = check_envelope(plan, [100, 400, 1000], ENVELOPE_C, ENVELOPE_c)
        return ec.passed, {"max_ratios": list(ec.ratios)}

    checks.append(_timed("figure2-envelope", envelope))

    def corollary():
        box = Sequence(0, np.ones(5))
        s1 = corollary1_error(plan, box, p=1, results=results).slope
        sinf = corollary1_error(plan, box, p=INFINITY, results=results).slope
        return s1 <= -0.9 and sinf <= -0.9, {"l1_slope": s1, "linf_slope": sinf}

    checks.append(_timed("corollary1-box5", corollary))

    def corollary_large_n():
        # same experiment once n^(1/4) is well above the box width
        big = [1000, 2000, 4000, 8000, 16000, 32000]
        res = [remainder(plan, n, power(plan.sequence, n)) for n in big]
        box = Sequence(0, np.ones(5))
        s1 = corollary1_error(plan, box, p=1, results=res).slope
        sinf = corollary1_error(plan, box, p=INFINITY, results=res).slope
        return s1 <= -0.9 and sinf <= -0.9, {"l1_slope": s1, "linf_slope": sinf, "ns": big}

    checks.append(_timed("corollary1-box5-large-n", corollary_large_n))
    return checks


def suite_binomial_oracle() -> list[Check]:
    checks = []
    a = catalog.bernoulli(0.5)

    def exact_powers():
        worst = 0.0
        for n in (10, 30, 60):
            got = power(a, n).coeffs
            want = np.array([float(Fraction(math.comb(n, k), 2**n)) for k in range(n + 1)])
            worst = max(worst, float(np.max(np.abs(got - want) / want)))
        return worst < 1e-12, {"max_rel_err": worst}

    checks.append(_timed("binomial-powers", exact_powers))

    def gaussian_slope():
        plan = build_plan(a, 0)
        fit = fit_slope(plan, default_n_list(30, 2000, 10), p=INFINITY)
        return fit.slope <= -1.4, {"linf_slope": fit.slope}

    checks.append(_timed("bernoulli-M0-slope", gaussian_slope))

    def two_points():
        plan = build_plan(catalog.symmetric_walk(), 0)
        pts = plan.points
        ok = (
            len(pts) == 2
            and abs(pts[0].theta) < 1e-12
            and abs(pts[1].theta - math.pi) < 1e-12
            and all(p.mu == 1 and abs(p.beta - 0.5) < 1e-10 and abs(p.alpha) < 1e-10 for p in pts)
        )
        worst_forbidden = 0.0
        scale = math.inf
        for r in remainders(plan, [10, 31, 100, 317, 1000]):
            forbidden = (r.ells + r.n) % 2 == 1
            ok = ok and np.all(r.exact[forbidden] == 0)
            worst_forbidden = max(worst_forbidden, float(np.max(np.abs(r.approx[forbidden]))))
            scale = min(scale, r.linf)
        ok = ok and worst_forbidden <= scale
        return ok, {"K": len(pts), "max_forbidden_approx": worst_forbidden, "remainder_scale": scale}

    checks.append(_timed("symmetric-walk-K2", two_points))
    return checks


def suite_attractor_closed_form() -> list[Check]:
    checks = []

    def closed_form():
        x = np.arange(-10, 10.0001, 0.25)
        worst = 0.0
        for beta in (1 / 8, 3 / 128, 0.1 + 0.05j):
            got = eval_attractor(AttractorSpec(1, beta), x)
            worst = max(worst, float(np.max(np.abs(got - gaussian_attractor(beta, x)))))
        return worst <= 1e-11, {"max_abs_err": worst}

    checks.append(_timed("gaussian-closed-form", closed_form))

    def unit_mass():
        worst = 0.0
        for spec in (AttractorSpec(1, 1 / 8), AttractorSpec(2, 3 / 128), AttractorSpec(3, 0.05)):
            x = np.arange(-60, 60.0001, 0.05)
            worst = max(worst, abs(np.sum(eval_attractor(spec, x)) * 0.05 - 1))
        return worst <= 1e-8, {"max_mass_err": worst}

    checks.append(_timed("unit-mass", unit_mass))

    def gamma_value():
        want = math.gamma(1.25) * (128 / 3) ** 0.25 / math.pi
        got = eval_attractor(AttractorSpec(2, 3 / 128), 0.0)
        return abs(got - want) <= 1e-10, {"value": got.real, "gamma_reduction": want}

    checks.append(_timed("quartic-at-zero", gamma_value))
    return checks


def random_point(rng: np.random.Generator, mu: int, count: int) -> TangencyPoint:
    cum = {
        2 * mu + nu: complex(rng.normal(), rng.normal()) * math.factorial(2 * mu + nu)
        for nu in range(1, count + 1)
    }
    return TangencyPoint(0.0, 1 + 0j, 1 + 0j, 0.0, mu, 1.0 + 0j, cum)


def suite_polynomial_routes(seed: int = 20240101, sets: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)

    def routes():
        worst = 0.0
        worst_lemma = 0.0
        for i in range(sets):
            mu = (1, 2, 3)[i % 3]
            pt = random_point(rng, mu, 6)
            built = build_polynomials(pt, 6)
            for m in range(1, 7):
                bell = bell_sum_polynomial(pt, m)
                degs = set(built[m].coeffs) | set(bell.coeffs)
                for d in degs:
                    x, y = built[m].coeffs.get(d, 0), bell.coeffs.get(d, 0)
                    worst = max(worst, abs(x - y) / max(abs(y), 1e-300))
            for w in rng.normal(size=20) + 1j * rng.normal(size=20):
                for m in range(1, 7):
                    ref = generating_coefficient(pt, m, w)
                    worst_lemma = max(worst_lemma, abs(built[m](w) - ref) / max(abs(ref), 1e-300))
        return worst <= 1e-12 and worst_lemma <= 1e-12, {
            "max_route_rel_err": worst, "max_lemma_rel_err": worst_lemma}

    return [_timed("build-vs-bell-sum", routes)]


SUITES = {
    "o3-figures": suite_o3_figures,
    "binomial-oracle": suite_binomial_oracle,
    "attractor-closed-form": suite_attractor_closed_form,
    "polynomial-routes": suite_polynomial_routes,
}


def run_suite(name: str) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    checks = SUITES[name]()
    return {"suite": name, "pass": all(c.passed for c in checks), "checks": [c.to_dict() for c in checks]}
