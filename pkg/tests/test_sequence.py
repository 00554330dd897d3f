import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convpow.catalog import bernoulli, o3
from convpow.errors import ParseError
from convpow.sequence import (
    INFINITY,
    Sequence,
    as_sequence,
    convolve,
    convolve_arrays,
    norm,
    power,
    powers,
    symbol_eval,
)

THETAS = np.linspace(0, 2 * np.pi, 64, endpoint=False)

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def sequences(draw, max_len=12, real=False):
    n = draw(st.integers(1, max_len))
    re = draw(st.lists(finite, min_size=n, max_size=n))
    im = [0.0] * n if real else draw(st.lists(finite, min_size=n, max_size=n))
    vals = np.array(re) + 1j * np.array(im)
    vals[0] += 1.5  # keep both ends away from zero
    vals[-1] += 1.5
    return Sequence(draw(st.integers(-5, 5)), vals)


def brute_convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


def test_trimmed_on_construction():
    s = Sequence(-2, [0, 0, 1, 2, 0])
    assert s.offset == 0 and list(s.coeffs) == [1, 2]
    assert s[5] == 0 and s[1] == 2
    with pytest.raises(ValueError):
        Sequence(0, [0, 0])


def test_delta_is_identity():
    b = as_sequence([1, -2j, 3], offset=4)
    assert convolve(Sequence.delta(), b).allclose(b, rtol=0)


def test_half_half_squared():
    h = as_sequence([0.5, 0.5])
    out = convolve(h, h)
    assert out.offset == 0
    np.testing.assert_array_equal(out.coeffs, [0.25, 0.5, 0.25])


def test_o3_square_matches_brute_force():
    exact = {-1: Fraction(-1, 16), 0: Fraction(9, 16), 1: Fraction(9, 16), 2: Fraction(-1, 16)}
    want = brute_convolve(exact, exact)
    got = convolve(o3(0.5), o3(0.5))
    assert (got.offset, got.last) == (-2, 4)
    for ell, v in want.items():
        assert got[ell] == pytest.approx(float(v), abs=1e-15)
    assert want[0] == Fraction(63, 256)


@pytest.mark.parametrize("n", [1, 2, 7, 30, 60])
def test_binomial_powers_exact(n):
    row = [Fraction(1)]
    for _ in range(n):
        row = [a + b for a, b in zip([Fraction(0)] + row, row + [Fraction(0)])]
    want = np.array([float(c / 2**n) for c in row])
    got = power(bernoulli(0.5), n)
    assert got.offset == 0
    np.testing.assert_allclose(got.coeffs.real, want, rtol=1e-12)


def test_power_base_case_and_errors():
    a = o3(0.3)
    assert power(a, 1) is a
    with pytest.raises(ValueError):
        power(a, 0)


def test_o3_power_sum():
    assert abs(power(o3(0.5), 7).coeffs.sum() - 1) < 1e-13


def test_power_methods_agree():
    a = o3(0.5)
    b = power(a, 200, method="binary")
    c = power(a, 200, method="iterate")
    assert b.allclose(c, rtol=0, atol=1e-14)
    swept = dict(powers(a, [3, 50, 200]))
    assert swept[200].allclose(c, rtol=0, atol=0)


def test_norms():
    assert norm(Sequence.delta(), 1) == 1
    assert norm(as_sequence([3, -4j]), INFINITY) == 4
    assert norm(as_sequence([0.5, 0.5]), 2) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    with pytest.raises(ValueError):
        norm(Sequence.delta(), 0.5)


def test_symbol_eval_examples():
    th = np.linspace(-3, 3, 11)
    np.testing.assert_allclose(symbol_eval(as_sequence([0.5, 0, 0.5], -1), th), np.cos(th), atol=1e-15)
    for lam in (0.1, 0.37, 0.5, 0.9):
        assert abs(symbol_eval(o3(lam), 0.0) - 1) < 1e-15


@pytest.mark.parametrize("lam", [0.25, 0.5, 0.75])
def test_o3_modulus_identity(lam):
    th = np.linspace(0, 2 * np.pi, 257)
    s2 = np.sin(th / 2) ** 2
    want = 1 - 4 / 9 * lam * (2 - lam) * (1 - lam**2) * s2**2 * (3 + 4 * lam * (1 - lam) * s2)
    np.testing.assert_allclose(np.abs(symbol_eval(o3(lam), th)) ** 2, want, atol=1e-12, rtol=0)


def test_json_roundtrip_and_rejection():
    a = as_sequence([1 + 2j, -0.5], offset=-3)
    b = Sequence.from_json(a.to_json())
    assert b.offset == -3 and np.array_equal(a.coeffs, b.coeffs)
    for text in (
        '{"offset": 0, "coeffs": [[1, 0], [Infinity, 0]]}',
        '{"offset": 0, "coeffs": [[NaN, 0]]}',
        '{"offset": 0.5, "coeffs": [[1, 0]]}',
        '{"offset": 0, "coeffs": []}',
        '{"offset": 0, "coeffs": [[1, 0, 2]]}',
        '{"offset": 0, "coeffs": [[0, 0]]}',
        "not json",
    ):
        with pytest.raises(ParseError):
            Sequence.from_json(text)


def test_immutable():
    a = o3(0.5)
    with pytest.raises(ValueError):
        a.coeffs[0] = 3


# properties ---------------------------------------------------------------


@given(sequences(), sequences(), sequences())
def test_commutative_associative(a, b, c):
    assert convolve(a, b).allclose(convolve(b, a), rtol=1e-12, atol=1e-12)
    left = convolve(convolve(a, b), c)
    right = convolve(a, convolve(b, c))
    scale = np.abs(left.coeffs).max()
    assert left.allclose(right, rtol=0, atol=1e-12 * scale)


@given(sequences(), sequences())
def test_symbol_is_multiplicative(a, b):
    lhs = symbol_eval(convolve(a, b), THETAS)
    rhs = symbol_eval(a, THETAS) * symbol_eval(b, THETAS)
    scale = norm(a, 1) * norm(b, 1)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@given(sequences(max_len=6), st.integers(1, 32))
def test_symbol_of_power(a, n):
    a = a.scale(1 / norm(a, 1))  # keep |F| <= 1 so powers stay O(1)
    lhs = symbol_eval(power(a, n), THETAS)
    rhs = symbol_eval(a, THETAS) ** n
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8), st.integers(1, 40))
def test_probability_powers(weights, n):
    w = np.array(weights) / np.sum(weights)
    p = power(as_sequence(w), n)
    assert np.all(p.coeffs.real >= -1e-15)
    assert abs(p.coeffs.sum() - 1) <= 1e-13


@given(sequences(max_len=8), st.integers(1, 20))
def test_young_inequality(a, n):
    assert norm(power(a, n), 1) <= norm(a, 1) ** n * (1 + 1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(33, 10_000), st.integers(33, 10_000), st.integers(0, 2**32 - 1))
def test_fft_and_direct_agree(la, lb, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=la) + 1j * rng.normal(size=la)
    y = rng.normal(size=lb) + 1j * rng.normal(size=lb)
    direct = convolve_arrays(x, y, "direct")
    fft = convolve_arrays(x, y, "fft")
    assert np.max(np.abs(direct - fft)) <= 1e-12 * np.max(np.abs(direct))
