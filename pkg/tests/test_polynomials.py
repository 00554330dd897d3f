import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convpow import catalog
from convpow.errors import InsufficientCumulants
from convpow.polynomials import (
    bell_sum_polynomial,
    build_polynomials,
    generating_coefficient,
    monomial,
    one,
    partitions,
)
from convpow.symbol import TangencyPoint, analyze
from convpow.verification import random_point


def test_o3_polynomials():
    _, rep = analyze(catalog.o3(0.5), 3)
    P = build_polynomials(rep.points[0], 3)
    assert P[0].coeffs == {0: 1}
    assert max((abs(c) for c in P[1].coeffs.values()), default=0.0) < 1e-12
    assert max((abs(c) for c in P[3].coeffs.values()), default=0.0) < 1e-12
    assert P[2].coeffs[6] == pytest.approx(-1 / 512, abs=1e-12)
    assert all(abs(c) < 1e-12 for d, c in P[2].coeffs.items() if d != 6)


def test_partition_counts():
    assert [sum(1 for _ in partitions(m)) for m in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert all(sum(p) == 7 for p in partitions(7))


def test_degree_structure():
    # every monomial in P_m has degree m + 2 mu |partition|
    pt = random_point(np.random.default_rng(1), 2, 5)
    for m, P in enumerate(build_polynomials(pt, 5)):
        if m == 0:
            continue
        allowed = {m + 4 * len(p) for p in partitions(m)}
        assert set(P.coeffs) <= allowed
        assert P.degree == m + 4 * m  # all-ones partition


def test_missing_cumulants():
    pt = TangencyPoint(0.0, 1, 1, 0.0, 1, 1.0, {3: 1.0})
    with pytest.raises(InsufficientCumulants):
        build_polynomials(pt, 2)


def test_helpers():
    assert one()(3.0) == 1
    P = monomial(2.0, 3)
    assert P(2.0) == 16 and P.degree == 3
    assert P.to_dict() == {"m": 0, "terms": [{"deg": 3, "re": 2.0, "im": 0.0}]}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_routes_agree(mu, seed):
    rng = np.random.default_rng(seed)
    pt = random_point(rng, mu, 6)
    built = build_polynomials(pt, 6)
    for m in range(1, 7):
        bell = bell_sum_polynomial(pt, m)
        for d in set(built[m].coeffs) | set(bell.coeffs):
            x, y = built[m].coeffs.get(d, 0), bell.coeffs.get(d, 0)
            assert abs(x - y) <= 1e-12 * abs(y)
        for w in rng.normal(size=3) + 1j * rng.normal(size=3):
            ref = generating_coefficient(pt, m, w)
            assert abs(built[m](w) - ref) <= 1e-12 * abs(ref)


def test_single_cumulant_closed_form():
    # only gamma_{2mu+1}: P_m = c^m / m! X^{m(2mu+1)}
    c = 0.3 - 0.1j
    pt = TangencyPoint(0.0, 1, 1, 0.0, 1, 1.0, {3: c * 6, 4: 0, 5: 0, 6: 0})
    for m, P in enumerate(build_polynomials(pt, 4)):
        nz = {d: v for d, v in P.coeffs.items() if v != 0}
        assert list(nz) == [3 * m]
        assert nz[3 * m] == pytest.approx(c**m / math.factorial(m), rel=1e-14)
