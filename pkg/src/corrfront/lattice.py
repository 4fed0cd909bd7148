"""Two-point correlators of free fermions on the infinite chain after a quench
from a periodic product state, the anti-diagonal kernel built from them, and a
brute-force many-body oracle on small rings.

Hamiltonian: H = -sum_m (a+_{m+1} a_m + a+_m a_{m+1}).
Correlator:  C_{m,n}(t) = <a+_m a_n>_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .specfun import airy_ai, bessel_j_signed, bessel_row_at_least

__all__ = [
    "PeriodicPattern",
    "ALTERNATING",
    "KernelMatrix",
    "FiniteRing",
    "correlator",
    "correlation_block",
    "front_profile",
    "front_peak",
    "kernel_matrix",
    "default_dim",
    "manybody_oracle",
    "ring_correlation_matrix",
    "wick_four_point",
    "MAX_KERNEL_DIM",
    "MAX_RING_SITES",
]

MAX_KERNEL_DIM = 5000
MAX_RING_SITES = 14
_MAX_INDEX = 10**7
_I_POW = np.array([1.0, 1j, -1.0, -1j])


def _ipow(k):
    """i**k for integer k (scalar or array), exact."""
    return _I_POW[np.asarray(k) % 4]


# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicPattern:
    """One unit cell of occupations; site m holds ``cell[m % period]`` fermions."""

    cell: tuple[int, ...]

    def __post_init__(self):
        cell = tuple(int(b) for b in self.cell)
        if not cell:
            raise DomainError("pattern cell must contain at least one site")
        if any(b not in (0, 1) for b in cell):
            raise DomainError(f"pattern bits must be 0 or 1, got {cell}")
        if not any(cell):
            raise DomainError("pattern must contain at least one occupied site")
        object.__setattr__(self, "cell", cell)

    @classmethod
    def from_string(cls, bits: str) -> "PeriodicPattern":
        bits = bits.strip()
        if not bits or set(bits) - {"0", "1"}:
            raise DomainError(f"pattern string must consist of 0/1 characters, got {bits!r}")
        return cls(tuple(int(c) for c in bits))

    def __str__(self):
        return "".join(map(str, self.cell))

    @property
    def period(self) -> int:
        return len(self.cell)

    @property
    def filling(self) -> float:
        return sum(self.cell) / self.period

    def occupation(self, m):
        return np.asarray(self.cell)[np.asarray(m) % self.period]

    def primitive(self) -> "PeriodicPattern":
        p = self.period
        for d in range(1, p + 1):
            if p % d == 0 and self.cell == self.cell[:d] * (p // d):
                return PeriodicPattern(self.cell[:d])
        return self  # pragma: no cover

    @property
    def is_alternating(self) -> bool:
        return self.primitive().cell == (1, 0)

    def rotated(self, shift: int) -> "PeriodicPattern":
        """Cell of the state translated by ``shift`` sites to the left."""
        k = shift % self.period
        return PeriodicPattern(self.cell[k:] + self.cell[:k])


ALTERNATING = PeriodicPattern((1, 0))


def _as_pattern(pattern) -> PeriodicPattern:
    if isinstance(pattern, PeriodicPattern):
        return pattern
    if isinstance(pattern, str):
        return PeriodicPattern.from_string(pattern)
    return PeriodicPattern(tuple(pattern))


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return t


def _light_cone(t: float) -> float:
    # beyond this many sites J_k(2t) is below 1e-14
    return 2.0 * t + 12.0 * (2.0 * t) ** (1.0 / 3.0) + 30.0


# ---------------------------------------------------------------------------
# Correlators
# ---------------------------------------------------------------------------


def correlation_block(pattern, t: float, rows, cols) -> np.ndarray:
    """Matrix C_{m,n}(t) for m in ``rows`` and n in ``cols``.

    The alternating state uses the closed form
    C_{m,n} = delta_{mn}/2 + i^{n+m} J_{n-m}(4t)/2; any other pattern sums
    C_{m,n} = i^{n-m} sum_p S_p J_{m-p}(2t) J_{n-p}(2t) over the sites p inside
    the light cone of both m and n.
    """
    pattern = _as_pattern(pattern)
    t = _check_time(t)
    m = np.asarray(rows, dtype=np.int64).ravel()
    n = np.asarray(cols, dtype=np.int64).ravel()
    if m.size and (np.abs(m).max() > _MAX_INDEX or np.abs(n).max() > _MAX_INDEX):
        raise DomainError(f"site indices are limited to |m| <= {_MAX_INDEX}")
    if pattern.is_alternating:
        return _alternating_block(t, m, n)
    return _general_block(pattern, t, m, n)


def _alternating_block(t, m, n):
    diff = n[None, :] - m[:, None]
    row = bessel_row_at_least(4.0 * t, int(np.abs(diff).max(initial=0)) + 1)
    out = 0.5 * _ipow(n[None, :] + m[:, None]) * bessel_j_signed(row, diff)
    return out + 0.5 * (diff == 0)


def _general_block(pattern, t, m, n):
    reach = math.floor(_light_cone(t))
    p_lo = max(m.min(), n.min()) - reach
    p_hi = min(m.max(), n.max()) + reach
    if p_lo > p_hi:
        return np.zeros((m.size, n.size), dtype=complex)
    p = np.arange(p_lo, p_hi + 1)
    occupied = p[pattern.occupation(p) == 1]
    if occupied.size == 0:
        return np.zeros((m.size, n.size), dtype=complex)
    dm = m[:, None] - occupied[None, :]
    dn = n[:, None] - occupied[None, :]
    need = int(max(np.abs(dm).max(), np.abs(dn).max())) + 1
    row = bessel_row_at_least(2.0 * t, need)
    total = bessel_j_signed(row, dm) @ bessel_j_signed(row, dn).T
    return _ipow(n[None, :] - m[:, None]) * total


def correlator(pattern, m: int, n: int, t: float) -> complex:
    """C_{m,n}(t) = <a+_m a_n>_t for the periodic product state ``pattern``."""
    return complex(correlation_block(pattern, t, [m], [n])[0, 0])


def front_profile(t: float, x: float) -> tuple[float, float]:
    """Rescaled correlator on the front line n = -m against Ai(x).

    Returns ``(2 (2t)^{1/3} C_{m,-m}(t), Ai(x))`` with
    m = floor(2t + x (2t)^{1/3} / 2) for the alternating state. C_{m,-m} is
    real there, so the lattice value keeps its sign.
    """
    t = _check_time(t)
    if t < 2:
        raise DomainError(f"front_profile needs t >= 2, got {t}")
    c = (2.0 * t) ** (1.0 / 3.0)
    m = math.floor(2.0 * t + x * c / 2.0)
    value = correlator(ALTERNATING, m, -m, t)
    return 2.0 * c * value.real, airy_ai(x).ai


def front_peak(t: float) -> int:
    """Site m > 0 maximising |C_{m,-m}(t)| for the alternating state."""
    t = _check_time(t)
    hi = math.ceil(_light_cone(t))
    m = np.arange(1, hi + 1)
    row = bessel_row_at_least(4.0 * t, 2 * hi)
    return int(m[np.argmax(np.abs(row[2 * m]))])


# ---------------------------------------------------------------------------
# Anti-diagonal kernel  C_{m,-n}(t),  m, n >= l
# ---------------------------------------------------------------------------


def default_dim(t: float, l: int) -> int:
    """Truncation so that every dropped entry has order m+n above the Bessel edge."""
    edge = 4.0 * t + 12.0 * (2.0 * t) ** (1.0 / 3.0) + 40.0
    return max(8, math.ceil(edge) - 2 * int(l))


@dataclass(frozen=True)
class KernelMatrix:
    t: float
    l: int
    dim: int
    entries: np.ndarray = field(repr=False)
    pattern: PeriodicPattern = ALTERNATING

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.l, self.l + self.dim)

    def phase_stripped(self) -> np.ndarray:
        """D K D^{-1} with D = diag(i^m); determinants and moments are unchanged."""
        m = self.sites
        return self.entries * _ipow(m[:, None] - m[None, :])


def kernel_matrix(pattern, t: float, l: int, dim: int | None = None) -> KernelMatrix:
    """entries[i, j] = C_{l+i, -(l+j)}(t), i, j < dim."""
    pattern = _as_pattern(pattern)
    t = _check_time(t)
    l = int(l)
    if l < 1:
        raise DomainError(f"kernel window needs l >= 1, got {l}")
    dim = default_dim(t, l) if dim is None else int(dim)
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    if dim > MAX_KERNEL_DIM:
        raise DomainError(f"dim={dim} exceeds the {MAX_KERNEL_DIM} truncation limit")
    m = np.arange(l, l + dim)
    entries = correlation_block(pattern, t, m, -m)
    entries.setflags(write=False)
    return KernelMatrix(t, l, dim, entries, pattern)


# ---------------------------------------------------------------------------
# Small rings: exact many-body evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteRing:
    """Periodic chain of ``sites`` sites, unit hopping."""

    sites: int

    def __post_init__(self):
        if self.sites < 2 or self.sites % 2:
            raise DomainError(f"ring size must be a positive even integer, got {self.sites}")
        if self.sites > MAX_RING_SITES:
            raise DomainError(f"ring size {self.sites} exceeds {MAX_RING_SITES}")

    def hopping_matrix(self) -> np.ndarray:
        n = self.sites
        h = np.zeros((n, n))
        for j in range(n):
            h[(j + 1) % n, j] -= 1.0
            h[j, (j + 1) % n] -= 1.0
        return h


def _ring_occupations(ring: FiniteRing, pattern: PeriodicPattern) -> np.ndarray:
    if ring.sites % pattern.period:
        raise DomainError(f"pattern period {pattern.period} does not divide ring size {ring.sites}")
    return pattern.occupation(np.arange(ring.sites))


def _hop(states, index, i, j):
    """a+_i a_j on every basis state: (source rows, target rows, signs)."""
    has_j = (states >> j) & 1 == 1
    if i == j:
        src = np.nonzero(has_j)[0]
        return src, src, np.ones(src.size)
    empty_i = (states >> i) & 1 == 0
    src = np.nonzero(has_j & empty_i)[0]
    s = states[src]
    sign = np.bitwise_count(s & ((1 << j) - 1)).astype(np.int64)
    s = s ^ (1 << j)
    sign += np.bitwise_count(s & ((1 << i) - 1))
    s = s | (1 << i)
    return src, index[s], np.where(sign % 2, -1.0, 1.0)


@lru_cache(maxsize=16)
def _sector(sites: int, particles: int):
    states = np.array(
        sorted(sum(1 << b for b in combo) for combo in combinations(range(sites), particles)),
        dtype=np.int64,
    )
    index = np.full(1 << sites, -1, dtype=np.int64)
    index[states] = np.arange(states.size)
    ham = np.zeros((states.size, states.size))
    for j in range(sites):
        k = (j + 1) % sites
        for a, b in ((k, j), (j, k)):
            src, dst, sign = _hop(states, index, a, b)
            np.add.at(ham, (dst, src), -sign)
    energies, vectors = np.linalg.eigh(ham)
    return states, index, energies, vectors


def _evolved_state(ring: FiniteRing, pattern: PeriodicPattern, t: float):
    occ = _ring_occupations(ring, pattern)
    states, index, energies, vectors = _sector(ring.sites, int(occ.sum()))
    start = index[int(sum(1 << b for b in np.nonzero(occ)[0]))]
    psi = vectors @ (np.exp(-1j * energies * t) * vectors[start].conj())
    return states, index, psi


def manybody_oracle(
    ring: FiniteRing, pattern, t: float, points: Iterable[Sequence[int]]
) -> list[complex]:
    """Correlators from exact evolution in the fixed-particle-number Fock sector.

    Each point is either ``(m, n)`` for <a+_m a_n>_t or ``(a, b, c, d)`` for
    <a+_a a_b a+_c a_d>_t. Site labels are taken modulo the ring size.
    """
    pattern = _as_pattern(pattern)
    t = _check_time(t)
    states, index, psi = _evolved_state(ring, pattern, t)
    n = ring.sites
    out = []
    for point in points:
        point = [int(q) % n for q in point]
        if len(point) not in (2, 4):
            raise DomainError(f"points must have 2 or 4 site labels, got {point}")
        phi = psi
        for a, b in reversed(list(zip(point[0::2], point[1::2]))):
            src, dst, sign = _hop(states, index, a, b)
            nxt = np.zeros_like(phi)
            nxt[dst] = sign * phi[src]
            phi = nxt
        out.append(complex(np.vdot(psi, phi)))
    return out


def ring_correlation_matrix(ring: FiniteRing, pattern, t: float) -> np.ndarray:
    """Full C_{m,n}(t) on the ring from one-body propagation, C(t) = U* C(0) U^T."""
    pattern = _as_pattern(pattern)
    t = _check_time(t)
    occ = _ring_occupations(ring, pattern).astype(float)
    e, v = np.linalg.eigh(ring.hopping_matrix())
    u = (v * np.exp(-1j * e * t)) @ v.T
    return (u.conj() * occ) @ u.T


def wick_four_point(corr: np.ndarray, a: int, b: int, c: int, d: int) -> complex:
    """<a+_a a_b a+_c a_d> from two-point functions of a Gaussian state."""
    n = corr.shape[0]
    a, b, c, d = (q % n for q in (a, b, c, d))
    return complex(corr[a, b] * corr[c, d] + corr[a, d] * ((b == c) - corr[c, b]))
