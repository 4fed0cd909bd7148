import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrfront.errors import DomainError
from corrfront.specfun import (
    AIRY_SERIES_MAX,
    AIRY_SERIES_MIN,
    airy_ai,
    airy_ai_array,
    airy_tail_integral,
    bessel_j_row,
    bessel_j_signed,
    bessel_row_at_least,
    derivative_at_zero,
    gauss_legendre,
)

from frozen import AIRY, AIRY_TAIL, BESSEL


@pytest.mark.parametrize("x", sorted(AIRY))
def test_airy_matches_mpmath(x):
    ai, aip = AIRY[x]
    got = airy_ai(x)
    assert got.ai == pytest.approx(ai, rel=1e-9, abs=2e-11)
    assert got.ai_prime == pytest.approx(aip, rel=1e-9, abs=2e-11)


@pytest.mark.parametrize("edge", [AIRY_SERIES_MIN, AIRY_SERIES_MAX])
def test_airy_regimes_join(edge):
    below = airy_ai_array(np.nextafter(edge, -np.inf))
    above = airy_ai_array(np.nextafter(edge, np.inf))
    assert abs(below[0] - above[0]) < 1e-11
    assert abs(below[1] - above[1]) < 5e-11


@given(st.floats(-12, 12))
@settings(max_examples=60, deadline=None)
def test_airy_satisfies_ode(x):
    # Ai'' = x Ai, checked with a central difference of Ai'
    h = 1e-4
    second = (airy_ai_array(x + h)[1] - airy_ai_array(x - h)[1]) / (2 * h)
    assert second == pytest.approx(x * airy_ai_array(x)[0], abs=1e-6)


def test_airy_domain():
    with pytest.raises(DomainError):
        airy_ai(30.5)
    with pytest.raises(DomainError):
        airy_ai(float("nan"))


@pytest.mark.parametrize("x", sorted(AIRY_TAIL))
def test_tail_integral(x):
    tol = 1e-10 if x <= -30 else 2e-12
    assert airy_tail_integral(x) == pytest.approx(AIRY_TAIL[x], abs=tol)


@pytest.mark.parametrize("case", sorted(BESSEL))
def test_bessel_matches_mpmath(case):
    n, x = case
    row = bessel_j_row(x, n)
    assert row[n] == pytest.approx(BESSEL[case], rel=1e-11, abs=1e-14)


@given(st.floats(0.01, 3000.0))
@settings(max_examples=40, deadline=None)
def test_bessel_normalisation_and_recurrence(x):
    n = int(x + 20 * x ** (1 / 3)) + 60
    j = bessel_j_row(x, n).values
    assert abs(j[0] + 2 * j[2::2].sum() - 1) < 1e-12
    k = np.arange(1, n)
    resid = j[:-2] + j[2:] - 2 * k / x * j[1:-1]
    assert np.abs(resid).max() < 1e-12 * max(1.0, 2 * n / x)


def test_bessel_row_prefix_consistent():
    short = bessel_j_row(500.0, 10).values
    long = bessel_j_row(500.0, 800).values
    assert np.allclose(short, long[:11], atol=1e-15)
    assert np.allclose(bessel_row_at_least(500.0, 11)[:11], short, atol=1e-15)


def test_bessel_special_cases():
    row = bessel_j_row(0.0, 5)
    assert list(row.values) == [1, 0, 0, 0, 0, 0]
    r = bessel_j_row(3.0, 6)
    assert r.signed(-3) == pytest.approx(-r[3])
    assert bessel_j_signed(r.values, -4) == pytest.approx(r[4])
    with pytest.raises(ValueError):
        r.values[0] = 2.0


@pytest.mark.parametrize("x, n", [(-1.0, 3), (1.0, -1), (1.0, 2**31)])
def test_bessel_errors(x, n):
    with pytest.raises(DomainError):
        bessel_j_row(x, n)


@pytest.mark.parametrize("n", [2, 7, 64, 200])
def test_gauss_legendre_against_numpy(n):
    x, w = np.polynomial.legendre.leggauss(n)
    rule = gauss_legendre(n, -1.0, 1.0)
    assert np.allclose(rule.nodes, x, atol=1e-14)
    assert np.allclose(rule.weights, w, atol=1e-14)


@given(st.integers(2, 40), st.floats(-5, 5), st.floats(0.1, 10))
@settings(max_examples=40, deadline=None)
def test_gauss_legendre_exact_for_polynomials(n, a, width):
    b = a + width
    rule = gauss_legendre(n, a, b)
    p = 2 * n - 1
    exact = (b ** (p + 1) - a ** (p + 1)) / (p + 1)
    scale = max(abs(a), abs(b)) ** (p + 1) * width
    assert abs(rule.integrate(lambda x: x**p) - exact) <= 1e-12 * max(scale, 1.0)


def test_gauss_legendre_errors():
    with pytest.raises(DomainError):
        gauss_legendre(1, 0, 1)
    with pytest.raises(DomainError):
        gauss_legendre(600, 0, 1)
    with pytest.raises(DomainError):
        gauss_legendre(10, 1, 1)


def test_derivative_at_zero():
    assert derivative_at_zero(math.exp, 1) == pytest.approx(1, abs=1e-12)
    assert derivative_at_zero(math.exp, 3) == pytest.approx(1, abs=1e-7)
    assert derivative_at_zero(math.exp, 1, one_sided=True, levels=4) == pytest.approx(1, abs=1e-7)
    assert derivative_at_zero(lambda x: 3 * x**2 - x, 2) == pytest.approx(6, abs=1e-9)


@pytest.mark.parametrize("x", [1e-300, 1e-12, 9.9e-7])
def test_bessel_tiny_argument(x):
    j = bessel_j_row(x, 4).values
    assert j[0] == pytest.approx(1.0 - x * x / 4, rel=1e-15)
    assert j[1] == pytest.approx(x / 2, rel=1e-12)
    assert np.all(np.isfinite(j))
