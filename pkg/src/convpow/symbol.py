"""Analysis of the symbol ``F_a`` on the unit circle.

Checks the normalization ``sup |F_a| = 1``, decides whether ``|F_a| = 1``
everywhere or only at finitely many tangency points, and classifies every
tangency point by its drift ``alpha``, dissipation order ``2 mu``, damping
coefficient ``beta`` and higher cumulants.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    AllModulusOne,
    DegenerateSymbol,
    DispersiveCase,
    DriftNotReal,
    NotNormalized,
)
from .sequence import Sequence, symbol_eval
from .series import log_series, taylor_at

TOL_NORM = 1e-10
TOL_DETECT = 1e-10
TOL_COEFF = 1e-9
CLUSTER_TOL = 1e-8
SNAP_TOL = 1e-9
SNAP_MAX_DEN = 12
CANDIDATE_LEVEL = -1e-6
MU_CAP_START = 4
MU_CAP_MAX = 64


class Alternative(str, enum.Enum):
    ALL_MODULUS_ONE = "ALL_MODULUS_ONE"
    FINITE_TANGENCY = "FINITE_TANGENCY"


# exact angles -----------------------------------------------------------


def rational_angle(theta: float, tol: float = SNAP_TOL, max_den: int = SNAP_MAX_DEN):
    """Return ``r`` in [0, 2) with ``theta = r*pi (mod 2 pi)`` if ``r`` has a small
    denominator and matches within ``tol``; otherwise None."""
    for q in range(1, max_den + 1):
        p = round(theta * q / math.pi)
        if abs(theta - p * math.pi / q) <= tol:
            return Fraction(p, q) % 2
    return None


def unit_from_turns(r: Fraction) -> complex:
    """``exp(i pi r)``, exact for multiples of pi/2."""
    r = Fraction(r) % 2
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): 1j, Fraction(1): -1 + 0j, Fraction(3, 2): -1j}
    if r in exact:
        return exact[r]
    return complex(np.exp(1j * math.pi * float(r)))


# data types -------------------------------------------------------------


@dataclass(frozen=True)
class TangencyPoint:
    """A classified point ``kappa = e^{i theta}`` where ``|F_a(kappa)| = 1``.

    Near it, ``F_a(kappa e^{i xi}) = F_a(kappa) exp(i alpha xi - beta xi^{2 mu}
    + sum_nu cumulants[nu] (i xi)^nu / nu!)``.
    """

    theta: float
    kappa: complex
    value: complex
    alpha: float
    mu: int
    beta: complex
    cumulants: dict = field(default_factory=dict)
    theta_pi: Fraction | None = None
    value_pi: Fraction | None = None
    weak_damping: bool = False

    @property
    def value_arg(self) -> float:
        if self.value_pi is not None:
            return math.pi * float(self.value_pi)
        return float(np.angle(self.value))

    def log_exponent(self, xi, order: int | None = None):
        """The exponent series truncated after the stored cumulants."""
        xi = np.asarray(xi, dtype=np.complex128)
        out = 1j * self.alpha * xi - self.beta * xi ** (2 * self.mu)
        for nu, g in sorted(self.cumulants.items()):
            if order is not None and nu > order:
                break
            out = out + g * (1j * xi) ** nu / math.factorial(nu)
        return out

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "kappa": [self.kappa.real, self.kappa.imag],
            "value": [self.value.real, self.value.imag],
            "alpha": self.alpha,
            "mu": self.mu,
            "beta": [self.beta.real, self.beta.imag],
            "cumulants": {str(nu): [g.real, g.imag] for nu, g in sorted(self.cumulants.items())},
            "weak_damping": self.weak_damping,
        }


@dataclass(frozen=True)
class SymbolReport:
    normalized: bool
    sup_modulus: float
    alternative: Alternative
    thetas: tuple = ()
    points: tuple = ()

    @property
    def K(self) -> int:
        return len(self.thetas)

    def to_dict(self) -> dict:
        d = {
            "alternative": self.alternative.value,
            "normalized": self.normalized,
            "sup_modulus": self.sup_modulus,
            "K": self.K,
            "thetas": list(self.thetas),
        }
        if self.points:
            d["points"] = [p.to_dict() for p in self.points]
        return d


# localization -----------------------------------------------------------


def _autocorrelation(a: Sequence):
    """Coefficients ``r_d`` (d = -(w-1)..w-1) with ``|F_a(e^{i t})|^2 = sum r_d e^{i d t}``."""
    r = np.convolve(a.coeffs, np.conj(a.coeffs[::-1]))
    d = np.arange(-(len(a) - 1), len(a))
    return d.astype(np.float64), r


def _modsq_derivative(d, r, k: int, theta: float) -> float:
    return float(np.real(np.sum(r * (1j * d) ** k * np.exp(1j * d * theta))))


def _polish(d, r, theta: float, bracket: float) -> float:
    """Newton on the lowest odd derivative of |F|^2 whose next derivative is
    clearly nonzero; that derivative has a simple root at a flat maximum."""
    for k in range(1, 2 * MU_CAP_MAX, 2):
        scale = float(np.sum(np.abs(r) * np.abs(d) ** (k + 1)))
        if scale == 0:
            return theta
        if abs(_modsq_derivative(d, r, k + 1, theta)) > 1e-3 * scale:
            break
    else:
        return theta
    t = theta
    for _ in range(60):
        h2 = _modsq_derivative(d, r, k + 1, t)
        if h2 == 0:
            break
        step = _modsq_derivative(d, r, k, t) / h2
        t -= step
        if abs(t - theta) > bracket:
            return theta
        if abs(step) < 1e-16:
            break
    return t


def find_tangency_points(
    a: Sequence,
    check: bool = True,
    tol_norm: float = TOL_NORM,
    tol_detect: float = TOL_DETECT,
    cluster_tol: float = CLUSTER_TOL,
) -> SymbolReport:
    """Locate the points of the unit circle where ``|F_a|`` reaches its maximum.

    With ``check=True`` a symbol whose maximum modulus differs from 1 raises
    :class:`NotNormalized` (carrying the factor ``1/sup``).  With ``check=False``
    the report is returned anyway and tangency is measured relative to the
    maximum.
    """
    width = a.last - a.offset + 1
    grid = max(4096, 64 * width)
    th = 2 * math.pi * np.arange(grid) / grid
    mod = np.abs(symbol_eval(a, th))
    top = mod.max()
    g = (mod / top) ** 2 - 1
    is_max = (g >= np.roll(g, 1)) & (g >= np.roll(g, -1)) & (g > CANDIDATE_LEVEL)
    step = 2 * math.pi / grid
    if mod.min() >= top * (1 - tol_norm):
        # flat modulus: no refinement needed, the grid already pins sup |F_a|
        normalized = bool(abs(top - 1) <= tol_norm)
        if check and not normalized:
            raise NotNormalized(top)
        return SymbolReport(normalized, float(top), Alternative.ALL_MODULUS_ONE)
    d, r = _autocorrelation(a)

    def neg_modsq(t):
        return -abs(symbol_eval(a, t)) ** 2

    refined = []
    for i in np.flatnonzero(is_max):
        lo, hi = th[i] - step, th[i] + step
        res = minimize_scalar(neg_modsq, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        t = float(res.x) if -res.fun >= mod[i] ** 2 else float(th[i])
        t = _polish(d, r, t, 2 * step)
        snap = rational_angle(t)
        if snap is not None:
            t_snap = math.pi * float(snap)
            if abs(symbol_eval(a, t_snap)) >= abs(symbol_eval(a, t)) - 1e-15:
                t = t_snap
        refined.append((t % (2 * math.pi), abs(symbol_eval(a, t))))

    sup = float(max(m for _, m in refined))
    normalized = bool(abs(sup - 1) <= tol_norm)
    if check and not normalized:
        raise NotNormalized(sup)

    hits = sorted(t for t, m in refined if (m / sup) ** 2 - 1 >= -tol_detect)
    merge = max(cluster_tol, step)
    thetas: list[float] = []
    for t in hits:
        if thetas and abs(t - thetas[-1]) < merge:
            continue
        thetas.append(t)
    if len(thetas) > 1 and (thetas[0] + 2 * math.pi - thetas[-1]) < merge:
        thetas.pop()
    return SymbolReport(normalized, sup, Alternative.FINITE_TANGENCY, tuple(thetas))


# classification ---------------------------------------------------------


def classify(a: Sequence, theta: float, M: int, tol_coeff: float = TOL_COEFF) -> TangencyPoint:
    """Expand ``log F_a(kappa e^{i xi}) / F_a(kappa)`` at ``kappa = e^{i theta}``
    and read off ``alpha``, ``mu``, ``beta`` and the cumulants up to ``2 mu + M``."""
    if M < 0:
        raise ValueError("expansion order M must be >= 0")
    theta_pi = rational_angle(theta)
    if theta_pi is not None:
        kappa = unit_from_turns(theta_pi)
        theta = math.pi * float(theta_pi)
    else:
        theta = theta % (2 * math.pi)
        kappa = complex(np.exp(1j * theta))

    mu_cap = MU_CAP_START
    mu = None
    while True:
        order = 2 * mu_cap + M + 2
        s = taylor_at(a, kappa, order)
        t = log_series(s).coeffs
        scale = float(np.max(np.abs(t[1:])))
        if scale == 0:
            raise DegenerateSymbol("the log-symbol is identically zero (a is a multiple of delta)")
        thr = tol_coeff * scale
        first = next((nu for nu in range(2, order + 1) if abs(t[nu]) > thr), None)
        if first is not None and first + M <= order:
            break
        if first is not None:
            mu_cap = max(mu_cap, (first + M) // 2 + 1)
            continue
        if mu_cap >= MU_CAP_MAX:
            raise DegenerateSymbol(
                f"no nonzero log-series coefficient up to order {order}; "
                "|F_a| looks constant near this point"
            )
        mu_cap *= 2

    if abs(t[1].real) > thr:
        raise DriftNotReal(f"first log coefficient {t[1]!r} is not purely imaginary")
    alpha = float(t[1].imag)
    if first % 2 == 1:
        raise DispersiveCase(f"leading log-series term has odd order {first}")
    mu = first // 2
    beta = complex(-t[first])
    if beta.real <= thr:
        raise DispersiveCase(f"Re(beta) = {beta.real!r} is not positive")
    cumulants = {
        nu: complex(t[nu] * math.factorial(nu) / (1j) ** nu) for nu in range(2 * mu + 1, 2 * mu + M + 1)
    }

    value = complex(s[0])
    value_pi = rational_angle(float(np.angle(value)))
    if value_pi is not None and abs(abs(value) - 1) <= 1e-9:
        value = unit_from_turns(value_pi)
    else:
        value_pi = None
    return TangencyPoint(
        theta=theta,
        kappa=kappa,
        value=value,
        alpha=alpha,
        mu=mu,
        beta=beta,
        cumulants=cumulants,
        theta_pi=theta_pi,
        value_pi=value_pi,
        weak_damping=beta.real < 100 * tol_coeff,
    )


def analyze(a: Sequence, M: int = 3, normalize: bool = False) -> tuple[Sequence, SymbolReport]:
    """Full symbol analysis: normalization, alternative, classified points.

    Returns the (possibly rescaled) sequence together with its report.  A
    non-normalized input raises :class:`NotNormalized` unless ``normalize`` is
    set, in which case it is multiplied by ``1 / sup |F_a|`` first.
    """
    report = find_tangency_points(a, check=not normalize)
    if not report.normalized:
        a = a.scale(1.0 / report.sup_modulus)
        report = find_tangency_points(a)
    if report.alternative is Alternative.ALL_MODULUS_ONE:
        raise AllModulusOne("|F_a| = 1 on the whole unit circle")
    points = tuple(classify(a, th, M) for th in report.thetas)
    return a, replace(report, points=points)
