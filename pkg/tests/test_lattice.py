import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrfront.errors import DomainError
from corrfront.specfun import bessel_j_row
from corrfront.lattice import (
    ALTERNATING,
    FiniteRing,
    PeriodicPattern,
    correlation_block,
    correlator,
    default_dim,
    front_peak,
    front_profile,
    kernel_matrix,
    manybody_oracle,
    ring_correlation_matrix,
    wick_four_point,
)

from frozen import ALTERNATING_CORRELATOR

cells = st.lists(st.integers(0, 1), min_size=1, max_size=8).filter(any)


def test_pattern_parsing():
    p = PeriodicPattern.from_string("1100")
    assert p.cell == (1, 1, 0, 0)
    assert str(p) == "1100"
    assert p.period == 4 and p.filling == 0.5
    assert PeriodicPattern.from_string("1010").is_alternating
    assert PeriodicPattern.from_string("101010").primitive().cell == (1, 0)
    assert not PeriodicPattern.from_string("1100").is_alternating
    assert p.rotated(1).cell == (1, 0, 0, 1)
    assert list(p.occupation([-1, 0, 5])) == [0, 1, 1]


@pytest.mark.parametrize("bad", ["", "12", "0000", "1 0"])
def test_pattern_rejects(bad):
    with pytest.raises(DomainError):
        PeriodicPattern.from_string(bad)


@pytest.mark.parametrize("key", sorted(ALTERNATING_CORRELATOR))
def test_alternating_correlator_frozen(key):
    m, n, t = key
    assert correlator("10", m, n, t) == pytest.approx(ALTERNATING_CORRELATOR[key], abs=1e-13)


@pytest.mark.parametrize("cell", ["1010", "101010"])
def test_general_path_reproduces_closed_form(cell):
    rows = np.arange(-7, 8)
    cols = np.arange(-9, 6)
    general = correlation_block(PeriodicPattern.from_string(cell), 2.3, rows, cols)
    assert np.allclose(general, correlation_block(ALTERNATING, 2.3, rows, cols), atol=1e-13)


def test_shifted_sublattice():
    # occupying the odd sites is the alternating state moved by one site
    rows, cols = np.arange(-5, 6), np.arange(-4, 7)
    shifted = correlation_block("01", 1.7, rows, cols)
    assert np.allclose(shifted, correlation_block(ALTERNATING, 1.7, rows + 1, cols + 1), atol=1e-13)


@given(cells, st.floats(0, 6))
@settings(max_examples=30, deadline=None)
def test_correlation_matrix_is_a_projector_density(cell, t):
    # Hermitian, and the diagonal starts at the occupations
    p = PeriodicPattern(tuple(cell))
    sites = np.arange(-6, 7)
    c = correlation_block(p, t, sites, sites)
    assert np.allclose(c, c.conj().T, atol=1e-12)
    c0 = correlation_block(p, 0.0, sites, sites)
    assert np.allclose(c0, np.diag(p.occupation(sites)), atol=1e-15)


@given(cells, st.floats(0.1, 4))
@settings(max_examples=25, deadline=None)
def test_density_conserved_over_a_cell(cell, t):
    # sum over any window of full cells of C_mm equals the particle count up to leakage,
    # so use a long window where boundary effects vanish
    p = PeriodicPattern(tuple(cell))
    sites = np.arange(-60 * p.period, 60 * p.period)
    diag = np.real(np.diag(correlation_block(p, t, sites, sites)))
    inner = slice(20 * p.period, 100 * p.period)
    assert diag[inner].sum() == pytest.approx(80 * sum(cell), abs=1e-8)


def test_translation_covariance():
    p = PeriodicPattern.from_string("110100")
    a = correlation_block(p, 3.1, [2, 5], [-1, 4])
    b = correlation_block(p, 3.1, [8, 11], [5, 10])
    assert np.allclose(a, b, atol=1e-13)


def test_kernel_matrix_and_phase_strip():
    k = kernel_matrix(ALTERNATING, 20.0, 30)
    assert k.dim == default_dim(20.0, 30)
    s = k.phase_stripped()
    assert np.abs(s.imag).max() < 1e-15
    assert np.allclose(s.real, s.real.T)
    # truncation: the last row is negligible
    assert np.abs(k.entries[-1]).max() < 1e-14
    with pytest.raises(ValueError):
        k.entries[0, 0] = 1.0


def test_kernel_general_pattern_is_real_after_strip():
    k = kernel_matrix("110100", 10.0, 15)
    assert np.abs(k.phase_stripped().imag).max() < 1e-14


@pytest.mark.parametrize("kwargs", [dict(l=0), dict(l=3, dim=0), dict(l=3, dim=6000)])
def test_kernel_errors(kwargs):
    with pytest.raises(DomainError):
        kernel_matrix("10", 5.0, **kwargs)


def test_time_errors():
    with pytest.raises(DomainError):
        correlator("10", 0, 0, -1.0)
    with pytest.raises(DomainError):
        correlation_block("10", 1.0, [10**8], [0])


def test_front_profile_near_airy():
    t = 1000.0
    c = (2 * t) ** (1 / 3)
    for n in (-10, -3, 0, 4, 12):
        # x placed exactly on the lattice site m, so the floor drops nothing
        m = int(2 * t) + n
        x = (2 * m - 4 * t) / c + 1e-9
        lat, ai = front_profile(t, x)
        assert lat == pytest.approx(ai, abs=2e-2)


def test_front_profile_errors():
    with pytest.raises(DomainError):
        front_profile(1.0, 0.0)


@pytest.mark.parametrize("t", [10.0, 100.0, 1000.0])
def test_front_moves_at_velocity_two(t):
    peak = front_peak(t)
    # the Airy maximum sits at x = -1.0188, i.e. slightly behind 2t
    c = (2 * t) ** (1 / 3)
    assert abs(peak - (2 * t - 1.0188 * c / 2)) <= 1.5


def test_ring_errors():
    for n in (3, 16, 0):
        with pytest.raises(DomainError):
            FiniteRing(n)
    with pytest.raises(DomainError):
        ring_correlation_matrix(FiniteRing(8), "111", 1.0)


@pytest.mark.parametrize("pattern", ["10", "1100", "1000"])
def test_manybody_two_point_matches_one_body(pattern):
    ring = FiniteRing(8)
    corr = ring_correlation_matrix(ring, pattern, 1.3)
    points = list(itertools.product(range(8), repeat=2))
    brute = manybody_oracle(ring, pattern, 1.3, points)
    assert np.allclose(brute, [corr[a, b] for a, b in points], atol=1e-12)


@given(st.lists(st.tuples(*[st.integers(-20, 20)] * 4), min_size=1, max_size=10), st.floats(0, 3))
@settings(max_examples=20, deadline=None)
def test_manybody_four_point_obeys_wick(points, t):
    ring = FiniteRing(8)
    corr = ring_correlation_matrix(ring, "1100", t)
    brute = manybody_oracle(ring, "1100", t, points)
    assert np.allclose(brute, [wick_four_point(corr, *q) for q in points], atol=1e-11)


@pytest.mark.parametrize("t", [0.3, 0.8])
def test_ring_matches_infinite_chain_near_diagonal(t):
    # the ring adds images at distance 12 - |m - n|; away from them the chain result holds
    ring = FiniteRing(12)
    corr = ring_correlation_matrix(ring, "10", t)
    j = bessel_j_row(4 * t, 16).values
    for m in range(-3, 4):
        for d in range(-3, 4):
            n = m + d
            image = abs(j[12 - abs(d)])
            assert abs(corr[m % 12, n % 12] - correlator("10", m, n, t)) < 1.1 * image + 1e-12
            if image < 1e-7:
                assert corr[m % 12, n % 12] == pytest.approx(correlator("10", m, n, t), abs=1e-6)


@pytest.mark.parametrize("t", [0.3, 0.8])
@pytest.mark.parametrize("l", [1, 3])
def test_second_moment_manybody_equals_minor_formula(t, l):
    # F = sum_{m=l}^{5} a+_m a_{-m} on a 12-site ring
    ring = FiniteRing(12)
    sites = list(range(l, 6))
    points = [(m, -m, n, -n) for m in sites for n in sites]
    brute = sum(manybody_oracle(ring, "10", t, points))
    corr = ring_correlation_matrix(ring, "10", t)
    k = np.array([[corr[m % 12, (-n) % 12] for n in sites] for m in sites])
    minors = np.trace(k) ** 2 - np.trace(k @ k)  # 2 e_2
    assert brute == pytest.approx(minors, abs=1e-8)
    first = sum(manybody_oracle(ring, "10", t, [(m, -m) for m in sites]))
    assert first == pytest.approx(np.trace(k), abs=1e-10)
