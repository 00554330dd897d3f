import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convpow import catalog
from convpow.engine import (
    EnvelopeCheck,
    approximate,
    build_plan,
    default_n_list,
    envelope_ratio,
    evaluation_window,
    fit_loglog,
    fit_slope,
    phase_factor,
    remainder,
    remainders,
)
from convpow.errors import DegenerateData, PlanIncomplete
from convpow.sequence import INFINITY, power


def test_bernoulli_leading_term_is_local_clt():
    plan = build_plan(catalog.bernoulli(0.5), 0)
    n = 100
    got = approximate(plan, n, [50])[0]
    assert got == pytest.approx(1 / math.sqrt(2 * math.pi * n / 4), rel=1e-12)
    exact = math.comb(n, 50) / 2**n
    assert abs(got - exact) < 1e-3


def test_remainder_is_exact_minus_approx(o3_plan):
    res = remainder(o3_plan, 57)
    ex = power(o3_plan.sequence, 57).window(res.lo, res.lo + res.remainder.size - 1)
    np.testing.assert_allclose(res.exact, ex, atol=1e-15)
    np.testing.assert_allclose(res.remainder, res.exact - res.approx, atol=0)
    assert res.linf == np.max(np.abs(res.remainder))
    assert res.norm(1) == pytest.approx(res.l1)


def test_window_covers_support(o3_plan):
    for n in (1, 10, 500):
        lo, hi = evaluation_window(o3_plan, n)
        assert lo <= -n and hi >= 2 * n


def test_remainders_match_single_calls(o3_plan):
    batch = remainders(o3_plan, [5, 40, 3], workers=2)
    assert [r.n for r in batch] == [3, 5, 40]
    for r in batch:
        assert np.allclose(r.remainder, remainder(o3_plan, r.n).remainder, atol=1e-15)


def test_higher_order_is_more_accurate():
    a = catalog.o3(0.5)
    n = 400
    errs = [remainder(build_plan(a, M), n).linf for M in (0, 3, 4)]
    assert errs[0] > errs[1] > errs[2]
    # theory: n^{-(M+2)/4} scaling
    assert errs[1] < 5 * n ** -1.25


def test_phase_factor_exact_and_generic():
    rep = build_plan(catalog.symmetric_walk(), 0).report
    pt = rep.points[1]
    ells = np.arange(-5, 6)
    np.testing.assert_array_equal(phase_factor(pt, 7, ells), (-1.0) ** (ells + 7))
    generic = replace(pt, theta=1.0, theta_pi=None, value_pi=None, value=np.exp(0.3j))
    want = np.exp(1j * (-ells * 1.0 + 7 * 0.3))
    np.testing.assert_allclose(phase_factor(generic, 7, ells), want, atol=1e-14)


def test_symmetric_walk_parity():
    plan = build_plan(catalog.symmetric_walk(), 0)
    for n in (10, 11, 100):
        r = remainder(plan, n)
        forbidden = (r.ells + n) % 2 == 1
        assert np.all(r.exact[forbidden] == 0)
        assert np.max(np.abs(r.approx[forbidden])) < 1e-15


def test_plan_validation(o3_plan):
    with pytest.raises(PlanIncomplete):
        replace(o3_plan, polynomials=())
    with pytest.raises(PlanIncomplete):
        replace(o3_plan, M=5)
    with pytest.raises(ValueError):
        approximate(o3_plan, 0, [0])


def test_fit_loglog_recovers_power_law():
    ns = default_n_list(20, 1000)
    fit = fit_loglog(ns, [3.0 * n**-1.25 for n in ns])
    assert fit.slope == pytest.approx(-1.25, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log10(3), abs=1e-12)
    assert fit.r2 == pytest.approx(1)
    with pytest.raises(DegenerateData):
        fit_loglog([1, 2, 3], [0, 0, 1])
    with pytest.raises(ValueError):
        fit_loglog([2, 1, 3], [1, 1, 1])


def test_fit_slope_requires_span(o3_plan):
    with pytest.raises(ValueError):
        fit_slope(o3_plan, [10, 11, 12, 13, 14, 15, 16, 17])


@given(st.integers(3, 60), st.integers(100, 10_000))
def test_default_n_list(count, n_max):
    ns = default_n_list(count, n_max)
    assert len(ns) >= count
    assert ns == sorted(set(ns))
    assert ns[0] == 1 and ns[-1] == n_max


def test_envelope_ratio_scales_with_C(o3_plan):
    res = remainder(o3_plan, 100)
    r1, l1 = envelope_ratio(o3_plan, res, 0.09, 0.225)
    r2, l2 = envelope_ratio(o3_plan, res, 0.18, 0.225)
    assert r1 == pytest.approx(2 * r2) and l1 == l2
    assert EnvelopeCheck(0.09, 0.225, (1,), (1.049,), (0,)).passed
    assert not EnvelopeCheck(0.09, 0.225, (1,), (1.051,), (0,)).passed


def test_lax_friedrichs_second_order():
    plan = build_plan(catalog.lax_friedrichs(0.5), 2)
    assert len(plan.points) == 2
    fit = fit_slope(plan, default_n_list(12, 800, 20), p=INFINITY)
    assert fit.slope < -1.9
