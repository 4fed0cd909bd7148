"""Which periodic product states develop a soft-edge (GOE/GSE) front, and how
to rescale their moments onto the alternating-state curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DomainError
from .lattice import PeriodicPattern, _as_pattern

__all__ = [
    "PatternReport",
    "front_coefficient",
    "front_coefficient_exact",
    "admits_rmt_front",
    "rescale_factors",
    "pattern_report",
    "enumerate_cells",
    "classification_counts",
    "MAX_SCAN_PERIOD",
]

MAX_SCAN_PERIOD = 12


def front_coefficient_exact(pattern) -> Fraction:
    """Amplitude c of the i^{m+n} J_{n-m}(4t) term in C_{m,n}(t).

    For an even cell length p this is (1/p) sum_j S_j (-1)^j. A cell of odd
    length is the same state as its doubled cell, whose alternating sum
    cancels, so c = 0.
    """
    cell = _as_pattern(pattern).cell
    if len(cell) % 2:
        return Fraction(0)
    return Fraction(sum(b if j % 2 == 0 else -b for j, b in enumerate(cell)), len(cell))


def front_coefficient(pattern) -> float:
    return float(front_coefficient_exact(pattern))


def admits_rmt_front(pattern) -> bool:
    return front_coefficient_exact(pattern) != 0


def rescale_factors(pattern) -> tuple[float, float]:
    """(A1, A2) with A1 M_1 and A2 M_2 collapsing onto the alternating state."""
    c = front_coefficient_exact(pattern)
    if c == 0:
        raise DomainError(f"pattern {_as_pattern(pattern)} has no front term; moments cannot be rescaled")
    a1 = Fraction(1, 2) / c
    return float(a1), float(a1 * a1)


@dataclass(frozen=True)
class PatternReport:
    pattern: PeriodicPattern
    coefficient: float
    admits_rmt: bool
    rescale: tuple[float, float] | None


def pattern_report(pattern) -> PatternReport:
    p = _as_pattern(pattern)
    c = front_coefficient_exact(p)
    return PatternReport(p, float(c), c != 0, rescale_factors(p) if c != 0 else None)


def enumerate_cells(period: int):
    """All cells of exactly ``period`` sites with at least one fermion."""
    period = int(period)
    if not 1 <= period <= MAX_SCAN_PERIOD:
        raise DomainError(f"scan period must lie in [1, {MAX_SCAN_PERIOD}], got {period}")
    for bits in product((0, 1), repeat=period):
        if any(bits):
            yield PeriodicPattern(bits)


def classification_counts(periods) -> dict[int, tuple[int, int]]:
    """{period: (admitting, exceptional)} over every cell of each length."""
    counts = {}
    for p in periods:
        good = bad = 0
        for cell in enumerate_cells(p):
            if admits_rmt_front(cell):
                good += 1
            else:
                bad += 1
        counts[int(p)] = (good, bad)
    return counts
