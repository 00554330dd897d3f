"""Truncated power series in one variable, and the Taylor expansion of a symbol
around a point of the unit circle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroConstantTerm
from .sequence import Sequence


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Coefficients ``c_0..c_N`` of a power series truncated after ``xi^N``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128).ravel()
        if arr.size == 0:
            raise ValueError("empty series")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __call__(self, xi):
        return np.polyval(self.coeffs[::-1], xi)


def taylor_at(a: Sequence, kappa: complex, order: int) -> TaylorSeries:
    """Taylor coefficients in ``xi`` of ``F_a(kappa e^{i xi})``.

    ``c_nu = sum_l a_l kappa^l (i l)^nu / nu!``, built by the recurrence
    ``term_nu = term_{nu-1} * (i l) / nu`` so large orders do not overflow.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    ells = a.indices.astype(np.float64)
    kappa = complex(kappa)
    ang = np.angle(kappa)
    # kappa^l through the angle keeps |kappa^l| = 1 exactly
    if kappa == 1:
        base = a.coeffs.astype(np.complex128)
    elif kappa == -1:
        base = a.coeffs * np.where(a.indices % 2 == 0, 1.0, -1.0)
    else:
        base = a.coeffs * np.exp(1j * ang * ells)
    out = np.empty(order + 1, dtype=np.complex128)
    term = base.copy()
    out[0] = term.sum()
    il = 1j * ells
    for nu in range(1, order + 1):
        term = term * il / nu
        out[nu] = term.sum()
    return TaylorSeries(out)


def log_series(s: TaylorSeries, zero_tol: float = 1e-14) -> TaylorSeries:
    """Series ``t`` of ``log(s / s_0)`` (so ``t_0 = 0`` and ``exp(t) = s / s_0``).

    Uses ``n t_n = n u_n - sum_{j=1}^{n-1} j t_j u_{n-j}`` with ``u = s / s_0``.
    """
    c0 = s.coeffs[0]
    if abs(c0) < zero_tol:
        raise ZeroConstantTerm(f"constant term {c0!r} is (numerically) zero")
    u = s.coeffs / c0
    n_max = s.order
    t = np.zeros(n_max + 1, dtype=np.complex128)
    for n in range(1, n_max + 1):
        acc = n * u[n]
        for j in range(1, n):
            acc -= j * t[j] * u[n - j]
        t[n] = acc / n
    return TaylorSeries(t)


def exp_series(t: TaylorSeries) -> TaylorSeries:
    """Series of ``exp(t)``; ``n e_n = sum_{j=1}^n j t_j e_{n-j}``."""
    n_max = t.order
    e = np.zeros(n_max + 1, dtype=np.complex128)
    e[0] = np.exp(t.coeffs[0])
    for n in range(1, n_max + 1):
        e[n] = sum(j * t.coeffs[j] * e[n - j] for j in range(1, n + 1)) / n
    return TaylorSeries(e)
