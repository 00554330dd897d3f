"""Correction polynomials ``P_{k,m}`` of the local expansion.

They are the Z^m coefficients of
``exp(sum_{nu>=1} gamma_{2mu+nu} / (2mu+nu)! Y^{2mu+nu} Z^nu)``.
:func:`build_polynomials` computes them with the power-series exponential
recurrence; :func:`bell_sum_polynomial` sums over integer partitions and is
kept as an independent cross-check.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .errors import InsufficientCumulants
from .symbol import TangencyPoint


@dataclass(frozen=True)
class ExpansionPolynomial:
    """Sparse polynomial ``sum_d coeffs[d] X^d``."""

    coeffs: dict = field(default_factory=dict)
    m: int = 0
    k: int = 0

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs.values())

    @property
    def degree(self) -> int:
        nz = [d for d, c in self.coeffs.items() if c != 0]
        return max(nz) if nz else -1

    def __call__(self, z):
        return eval_poly(self, z)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "terms": [
                {"deg": d, "re": complex(c).real, "im": complex(c).imag}
                for d, c in sorted(self.coeffs.items())
            ],
        }


def one(k: int = 0) -> ExpansionPolynomial:
    return ExpansionPolynomial({0: 1.0 + 0j}, 0, k)


def monomial(coeff: complex, degree: int, m: int = 0, k: int = 0) -> ExpansionPolynomial:
    return ExpansionPolynomial({degree: complex(coeff)}, m, k)


def eval_poly(P: ExpansionPolynomial, z):
    """Horner evaluation over the dense coefficient list."""
    deg = P.degree
    if deg < 0:
        return 0 * z
    acc = 0j
    for d in range(deg, -1, -1):
        acc = acc * z + P.coeffs.get(d, 0)
    return acc


def _scaled_cumulants(point: TangencyPoint, M: int) -> list[complex]:
    """``c_nu = gamma_{2mu+nu} / (2mu+nu)!`` for nu = 1..M."""
    two_mu = 2 * point.mu
    missing = [two_mu + nu for nu in range(1, M + 1) if two_mu + nu not in point.cumulants]
    if missing:
        raise InsufficientCumulants(f"cumulants {missing} needed for order M={M} are missing")
    return [0j] + [point.cumulants[two_mu + nu] / math.factorial(two_mu + nu) for nu in range(1, M + 1)]


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for d1, c1 in p.items():
        for d2, c2 in q.items():
            out[d1 + d2] = out.get(d1 + d2, 0j) + c1 * c2
    return out


def build_polynomials(point: TangencyPoint, M: int, k: int = 0) -> list[ExpansionPolynomial]:
    """``[P_0, ..., P_M]`` via ``m E_m = sum_{j=1}^m j A_j E_{m-j}``,
    where ``A_j = c_j Y^{2mu+j}``."""
    c = _scaled_cumulants(point, M)
    two_mu = 2 * point.mu
    E: list[dict] = [{0: 1.0 + 0j}]
    for m in range(1, M + 1):
        acc: dict = {}
        for j in range(1, m + 1):
            if c[j] == 0:
                continue
            for d, v in E[m - j].items():
                deg = d + two_mu + j
                acc[deg] = acc.get(deg, 0j) + j * c[j] * v
        E.append({d: v / m for d, v in acc.items()})
    return [ExpansionPolynomial(e, m, k) for m, e in enumerate(E)]


def partitions(m: int, largest: int | None = None) -> Iterator[list[int]]:
    """Integer partitions of ``m`` as non-increasing part lists."""
    if largest is None:
        largest = m
    if m == 0:
        yield []
        return
    for part in range(min(m, largest), 0, -1):
        for rest in partitions(m - part, part):
            yield [part] + rest


def bell_sum_polynomial(point: TangencyPoint, m: int, k: int = 0) -> ExpansionPolynomial:
    """``P_m(X) = X^m sum_{<nu>=m} X^{2mu|nu|} / nu! prod_l c_l^{nu_l}``,
    summing over all partitions of ``m`` (multiplicities ``nu_l`` of part ``l``)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    c = _scaled_cumulants(point, m)
    two_mu = 2 * point.mu
    coeffs: dict = {}
    for parts in partitions(m):
        mult = Counter(parts)
        size = len(parts)
        term = 1.0 + 0j
        for ell, nu_l in mult.items():
            term *= c[ell] ** nu_l / math.factorial(nu_l)
        deg = m + two_mu * size
        coeffs[deg] = coeffs.get(deg, 0j) + term
    return ExpansionPolynomial(coeffs, m, k)


def generating_coefficient(point: TangencyPoint, m: int, w: complex) -> complex:
    """``(w^m / m!) d^m/dz^m g(w, 0)`` with ``g(w, z) = exp(w^{2mu} r(z))``.

    Computed as the z^m coefficient of ``exp(w^{2mu} r(z))`` by a scalar series
    recurrence at the given ``w``; equals ``P_m(w)``.
    """
    c = _scaled_cumulants(point, m)
    w2mu = complex(w) ** (2 * point.mu)
    e = [1.0 + 0j]
    for n in range(1, m + 1):
        e.append(sum(j * w2mu * c[j] * e[n - j] for j in range(1, n + 1)) / n)
    return complex(w) ** m * e[m]
