"""Generating function and moments of the cumulative correlation operator

    F_l = sum_{m >= l} a+_m a_{-m},

    Q(lambda, t, l) = <exp(lambda F_l)>_t = det[1 + lambda C_{m,-n}(t)]_{m,n >= l},

together with the even/mixed combinations G1, G2 that map onto the soft-edge
generating functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InstabilityError, NumericalWarning
from .lattice import ALTERNATING, kernel_matrix

__all__ = [
    "FrontWindow",
    "MomentTable",
    "front_window",
    "window_index",
    "aligned_coordinate",
    "generating_q",
    "moments",
    "elementary_symmetric",
    "first_moment_direct",
    "lattice_g1",
    "lattice_g2",
    "MAX_MOMENT_ORDER",
]

MAX_MOMENT_ORDER = 8
_IMAG_TOL_DET = 1e-8
_IMAG_TOL_EIG = 1e-10
_RECHECK_EXTRA = 50
_RECHECK_TOL = 1e-6


def window_index(t: float, s: float) -> int:
    """l_{t,s} = floor(2t + s (2t)^{1/3} / 2)."""
    return math.floor(2.0 * t + s * (2.0 * t) ** (1.0 / 3.0) / 2.0)


def aligned_coordinate(t: float, l: int) -> float:
    """Rescaled position that the lattice window ``l`` represents.

    Sums over m >= l behave like midpoint rules on cells of width
    2 / (2t)^{1/3} in the rescaled variable, so their lower limit sits half a
    cell below the first site: (2l - 1 - 4t) / (2t)^{1/3}.
    """
    return (2.0 * l - 1.0 - 4.0 * t) / (2.0 * t) ** (1.0 / 3.0)


@dataclass(frozen=True)
class FrontWindow:
    t: float
    s: float

    def __post_init__(self):
        if not self.t >= 2:
            raise DomainError(f"front window needs t >= 2, got {self.t}")
        if self.l < 1:
            raise DomainError(f"(t={self.t}, s={self.s}) gives window l={self.l} < 1")

    @property
    def l(self) -> int:
        return window_index(self.t, self.s)

    @property
    def aligned_s(self) -> float:
        return aligned_coordinate(self.t, self.l)


def front_window(t: float, s: float) -> FrontWindow:
    return FrontWindow(float(t), float(s))


@dataclass(frozen=True)
class MomentTable:
    """Moments M_1..M_n of F_l at time t (``values[0]`` is M_1)."""

    t: float
    l: int
    values: tuple[float, ...]
    s: float | None = None

    def __getitem__(self, n: int) -> float:
        if n < 1:
            raise IndexError("moments are numbered from 1")
        return self.values[n - 1]

    @property
    def n_max(self) -> int:
        return len(self.values)

    @property
    def window(self) -> FrontWindow | None:
        return None if self.s is None else FrontWindow(self.t, self.s)


def _check_args(t, l):
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    l = int(l)
    if l < 1:
        raise DomainError(f"window index must be >= 1, got {l}")
    return t, l


def generating_q(
    lam: float, t: float, l: int, pattern=ALTERNATING, dim: int | None = None, verify: bool = False
) -> float:
    """Q(lambda, t, l) as the LU determinant of 1 + lambda K.

    With ``verify=True`` the determinant is recomputed with 50 more rows and
    columns; a change above 1e-6 raises :class:`InstabilityError`.
    """
    t, l = _check_args(t, l)
    lam = float(lam)
    value = _det(lam, kernel_matrix(pattern, t, l, dim))
    if verify:
        kernel = kernel_matrix(pattern, t, l, None if dim is None else dim)
        wider = _det(lam, kernel_matrix(pattern, t, l, kernel.dim + _RECHECK_EXTRA))
        if abs(wider - value) > _RECHECK_TOL:
            raise InstabilityError(
                f"Q({lam}, {t}, {l}) moved by {abs(wider - value):.3g} under truncation re-check"
            )
    return value


def _det(lam, kernel):
    a = np.eye(kernel.dim) + lam * kernel.entries
    d = np.linalg.det(a)
    if abs(d.imag) > _IMAG_TOL_DET:
        raise InstabilityError(f"determinant has imaginary part {d.imag:.3g}")
    return float(d.real)


def _kernel_eigenvalues(kernel) -> np.ndarray:
    k = kernel.phase_stripped()
    residue = np.abs(k.imag).max(initial=0.0)
    if residue > _IMAG_TOL_EIG:
        raise InstabilityError(f"phase-stripped kernel is not real (residue {residue:.3g})")
    k = k.real
    if np.array_equal(k, k.T):
        return np.linalg.eigvalsh(k)
    return np.linalg.eigvals(k)


def elementary_symmetric(eigenvalues, n_max: int) -> np.ndarray:
    """e_1..e_{n_max} of the eigenvalues via Newton's identities on power sums."""
    lam = np.asarray(eigenvalues)
    power = np.array([np.sum(lam**k) for k in range(1, n_max + 1)])
    e = [1.0 + 0j]
    for k in range(1, n_max + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * power[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    return np.array(e[1:])


def moments(t: float, l: int, n_max: int = 2, pattern=ALTERNATING, s: float | None = None) -> MomentTable:
    """M_n = <F_l^n>_t = n! e_n(K) for n = 1..n_max (n_max <= 8)."""
    t, l = _check_args(t, l)
    n_max = int(n_max)
    if not 1 <= n_max <= MAX_MOMENT_ORDER:
        raise DomainError(f"n_max must lie in [1, {MAX_MOMENT_ORDER}], got {n_max}")
    eig = _kernel_eigenvalues(kernel_matrix(pattern, t, l))
    e = elementary_symmetric(eig, n_max)
    bound = np.abs(eig).sum()
    values = []
    for n, en in enumerate(e, start=1):
        if abs(en.imag) > _IMAG_TOL_EIG * max(1.0, abs(en.real)):
            raise InstabilityError(f"e_{n} has imaginary residue {en.imag:.3g}")
        scale = bound**n / math.factorial(n)
        if scale > 0 and abs(en.real) < 1e-14 * scale:
            warnings.warn(
                f"M_{n}(t={t}, l={l}) is indistinguishable from zero", NumericalWarning, stacklevel=2
            )
        values.append(math.factorial(n) * float(en.real))
    return MomentTable(t, l, tuple(values), s)


def first_moment_direct(t: float, l: int, pattern=ALTERNATING) -> float:
    """M_1 as the plain trace sum_{m >= l} C_{m,-m}(t)."""
    t, l = _check_args(t, l)
    kernel = kernel_matrix(pattern, t, l)
    return float(np.trace(kernel.entries).real)


def lattice_g1(lam: float, t: float, l: int, pattern=ALTERNATING) -> float:
    """G1 = <cosh(2 sqrt(lambda) F_l)> = [Q(2 sqrt(lambda)) + Q(-2 sqrt(lambda))] / 2."""
    lam = float(lam)
    if lam < 0:
        raise DomainError(f"lattice_g1 needs lambda >= 0, got {lam}")
    r = 2.0 * math.sqrt(lam)
    return 0.5 * generating_q(r, t, l, pattern) + 0.5 * generating_q(-r, t, l, pattern)


def lattice_g2(lam: float, t: float, l: int, pattern=ALTERNATING) -> float:
    """G2 = <cosh(wF) - sqrt(lambda/(2-lambda)) sinh(wF)>, w = 2 sqrt(lambda(2-lambda))."""
    lam = float(lam)
    if not 0 <= lam < 2:
        raise DomainError(f"lattice_g2 needs 0 <= lambda < 2, got {lam}")
    w = 2.0 * math.sqrt(lam * (2.0 - lam))
    r = math.sqrt(lam / (2.0 - lam))
    plus, minus = 0.5 * (1.0 + r), 0.5 * (1.0 - r)
    if minus == 0.0:
        return plus * generating_q(-w, t, l, pattern)
    return plus * generating_q(-w, t, l, pattern) + minus * generating_q(w, t, l, pattern)
