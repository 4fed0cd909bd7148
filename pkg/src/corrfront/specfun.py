"""Special functions: integer-order Bessel J rows, Airy Ai/Ai', the Airy tail
integral and Gauss-Legendre rules.

Everything here works in float64. The Airy routines are vectorised over numpy
arrays; the public scalar wrappers enforce the supported domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "BesselRow",
    "AiryValue",
    "QuadratureRule",
    "bessel_j_row",
    "bessel_j_signed",
    "airy_ai",
    "airy_ai_array",
    "airy_tail_integral",
    "airy_tail_integral_array",
    "gauss_legendre",
    "derivative_at_zero",
    "AIRY_SERIES_MAX",
    "AIRY_SERIES_MIN",
    "AIRY_DOMAIN",
    "TAIL_WINDOW",
]

# ---------------------------------------------------------------------------
# Bessel J_n(x), n = 0..n_max
# ---------------------------------------------------------------------------

_INDEX_LIMIT = 2**31 - 1
_RESCALE_AT = 1e250


@dataclass(frozen=True)
class BesselRow:
    """J_0(argument) .. J_{n_max}(argument)."""

    argument: float
    values: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        return self.values[n]

    def signed(self, n):
        """J_n for any integer n (array-like allowed) using J_{-n} = (-1)^n J_n."""
        return bessel_j_signed(self.values, n)


def _miller_start(x: float, n_max: int) -> int:
    # the recurrence must start above the turning point n ~ x, whatever n_max is
    top = max(n_max, math.ceil(x))
    return top + math.ceil(10.0 * math.sqrt(max(top, 1.0))) + 10


def bessel_j_row(x: float, n_max: int) -> BesselRow:
    """Return J_0(x), ..., J_{n_max}(x) from one backward (Miller) recurrence.

    The recurrence J_{k-1} = (2k/x) J_k - J_{k+1} is run downward from an index
    well above both ``n_max`` and ``x`` and normalised with
    J_0 + 2 (J_2 + J_4 + ...) = 1. Intermediate values are rescaled to stay
    inside the float64 range, so arguments in the thousands are fine.

    Parameters
    ----------
    x : float
        Argument, ``x >= 0``.
    n_max : int
        Highest order returned.
    """
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"bessel_j_row needs x >= 0, got {x!r}")
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if x == 0.0:
        values = np.zeros(n_max + 1)
        values[0] = 1.0
        return BesselRow(0.0, _frozen(values))
    if x < _SMALL_X:
        return BesselRow(x, _frozen(_small_series(x, n_max)))
    start = _miller_start(x, n_max)
    if start > _INDEX_LIMIT:
        raise DomainError(f"n_max={n_max} pushes the recurrence start past {_INDEX_LIMIT}")
    return BesselRow(x, _frozen(_miller(x, start)[: n_max + 1]))


_SMALL_X = 1e-6


def _small_series(x, n_max):
    # J_n(x) = (x/2)^n / n! [1 - (x/2)^2 / (n+1)], exact to float64 for tiny x
    h = 0.5 * x
    out = np.empty(n_max + 1)
    lead = 1.0
    for n in range(n_max + 1):
        if n:
            lead *= h / n
        out[n] = lead * (1.0 - h * h / (n + 1))
    return out


def _miller(x: float, start: int) -> np.ndarray:
    f = np.zeros(start + 2)
    f[start] = 1e-300
    two_over_x = 2.0 / x
    nxt, cur = 0.0, 1e-300
    for k in range(start, 0, -1):
        prev = k * two_over_x * cur - nxt
        f[k - 1] = prev
        nxt, cur = cur, prev
        if abs(prev) > _RESCALE_AT:
            f[k - 1 :] /= _RESCALE_AT
            nxt /= _RESCALE_AT
            cur /= _RESCALE_AT
    norm = f[0] + 2.0 * math.fsum(f[2::2])
    return f / norm


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def bessel_j_signed(values: np.ndarray, n):
    """Look up J_n for signed orders in a row of non-negative orders."""
    n = np.asarray(n)
    out = values[np.abs(n)]
    return np.where((n < 0) & (np.abs(n) % 2 == 1), -out, out)


@lru_cache(maxsize=64)
def _cached_row(x: float, n_max: int) -> np.ndarray:
    return bessel_j_row(x, n_max).values


def bessel_row_at_least(x: float, n_needed: int) -> np.ndarray:
    """Cached row of J_n(x) covering orders 0..n_needed (possibly more).

    Requests are rounded up so that nearby callers share one recurrence.
    """
    n = max(int(n_needed), int(math.ceil(x + 20.0 * max(x, 1.0) ** (1 / 3) + 60)))
    n = 256 * ((n + 255) // 256)
    return _cached_row(float(x), n)


# ---------------------------------------------------------------------------
# Airy function
# ---------------------------------------------------------------------------

AIRY_DOMAIN = (-30.0, 30.0)
# Maclaurin series on [AIRY_SERIES_MIN, AIRY_SERIES_MAX], asymptotic outside.
# The oscillatory side needs zeta = (2/3)|x|^{3/2} >= 12 before the asymptotic
# series reaches 1e-11, hence the asymmetric window.
AIRY_SERIES_MIN = -7.0
AIRY_SERIES_MAX = 4.8

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
_SERIES_TERMS = 70
_ASYM_TERMS = 24
_SQRT_PI = math.sqrt(math.pi)


def _uv_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return np.array(u), np.array(v)


_U, _V = _uv_coefficients(_ASYM_TERMS)


@dataclass(frozen=True)
class AiryValue:
    ai: float
    ai_prime: float


def _airy_series(x):
    x3 = x**3
    f = np.ones_like(x)
    g = x.copy()
    fp = np.zeros_like(x)
    gp = np.ones_like(x)
    tf = np.ones_like(x)  # a_k x^{3k}
    tg = x.copy()  # b_k x^{3k+1}
    for k in range(1, _SERIES_TERMS):
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        f += tf
        g += tg
        # derivative terms: d/dx a_k x^{3k} = 3k a_k x^{3k-1} = tf_{k-1} x^2 / (3k-1)
        fp += 3 * k * tf / np.where(x == 0, 1.0, x)
        gp += (3 * k + 1) * tg / np.where(x == 0, 1.0, x)
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _truncated(series_terms, inv_zeta, signs):
    """Sum sign_k c_k zeta^-k, stopping before terms start to grow."""
    total = np.zeros_like(inv_zeta)
    last = np.full_like(inv_zeta, np.inf)
    active = np.ones(inv_zeta.shape, dtype=bool)
    power = np.ones_like(inv_zeta)
    for k, c in enumerate(series_terms):
        term = signs[k] * c * power
        size = np.abs(term)
        active &= size < last
        total += np.where(active, term, 0.0)
        last = np.where(active, size, last)
        power = power * inv_zeta
    return total


def _airy_asym_positive(x):
    zeta = 2.0 / 3.0 * x**1.5
    inv = 1.0 / zeta
    alt = np.array([(-1.0) ** k for k in range(_ASYM_TERMS)])
    su = _truncated(_U, inv, alt)
    sv = _truncated(_V, inv, alt)
    pref = np.exp(-zeta) / (2.0 * _SQRT_PI)
    ai = pref * x**-0.25 * su
    aip = -pref * x**0.25 * sv
    return ai, aip


def _airy_asym_negative(x):
    y = -x
    zeta = 2.0 / 3.0 * y**1.5
    inv = 1.0 / zeta
    n_half = _ASYM_TERMS // 2
    inv2 = inv * inv
    even_sign = np.array([(-1.0) ** k for k in range(n_half)])
    pu = _truncated(_U[0::2][:n_half], inv2, even_sign)
    qu = inv * _truncated(_U[1::2][:n_half], inv2, even_sign)
    pv = _truncated(_V[0::2][:n_half], inv2, even_sign)
    qv = inv * _truncated(_V[1::2][:n_half], inv2, even_sign)
    phase = zeta - math.pi / 4.0
    c, s = np.cos(phase), np.sin(phase)
    ai = y**-0.25 / _SQRT_PI * (c * pu + s * qu)
    aip = y**0.25 / _SQRT_PI * (s * pv - c * qv)
    return ai, aip


def airy_ai_array(x):
    """Vectorised (Ai(x), Ai'(x)); no domain check, valid for any real x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    mid = (x >= AIRY_SERIES_MIN) & (x <= AIRY_SERIES_MAX)
    hi = x > AIRY_SERIES_MAX
    lo = x < AIRY_SERIES_MIN
    if mid.any():
        ai[mid], aip[mid] = _airy_series(x[mid])
    if hi.any():
        ai[hi], aip[hi] = _airy_asym_positive(x[hi])
    if lo.any():
        ai[lo], aip[lo] = _airy_asym_negative(x[lo])
    if scalar:
        return ai[0], aip[0]
    return ai, aip


def _check_airy_domain(x: float) -> float:
    x = float(x)
    lo, hi = AIRY_DOMAIN
    if not lo <= x <= hi:
        raise DomainError(f"x={x} outside the supported range [{lo}, {hi}]")
    return x


def airy_ai(x: float) -> AiryValue:
    """Ai(x) and Ai'(x) for x in [-30, 30], absolute error below 1e-10."""
    ai, aip = airy_ai_array(_check_airy_domain(x))
    return AiryValue(float(ai), float(aip))


# ---------------------------------------------------------------------------
# Tail integral  int_x^inf Ai(y) dy
# ---------------------------------------------------------------------------

TAIL_WINDOW = 40.0
_TAIL_PANELS = 8
_TAIL_NODES = 40


def _tail_remainder(X):
    # int_X^inf Ai ~ e^{-zeta} / (2 sqrt(pi) X^{3/4}) (1 - 41/(72 zeta) + 9241/(10368 zeta^2))
    zeta = 2.0 / 3.0 * X**1.5
    series = 1.0 - 41.0 / 72.0 / zeta + 9241.0 / 10368.0 / zeta**2
    return np.exp(-zeta) / (2.0 * _SQRT_PI * X**0.75) * series


def airy_tail_integral_array(x):
    """Vectorised int_x^inf Ai(y) dy (composite Gauss-Legendre + asymptotic remainder)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rule = gauss_legendre(_TAIL_NODES, 0.0, TAIL_WINDOW / _TAIL_PANELS)
    offsets = np.arange(_TAIL_PANELS) * (TAIL_WINDOW / _TAIL_PANELS)
    local = (offsets[:, None] + rule.nodes[None, :]).ravel()
    weights = np.tile(rule.weights, _TAIL_PANELS)
    pts = x[:, None] + local[None, :]
    ai, _ = airy_ai_array(pts.ravel())
    body = ai.reshape(pts.shape) @ weights
    return body + _tail_remainder(x + TAIL_WINDOW)


def airy_tail_integral(x: float) -> float:
    """int_x^inf Ai(y) dy for x in [-30, 30], absolute error below 1e-9."""
    return float(airy_tail_integral_array(_check_airy_domain(x))[0])


# ---------------------------------------------------------------------------
# Gauss-Legendre
# ---------------------------------------------------------------------------

_GL_MAX_NODES = 512
_NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=128)
def _legendre_reference(n: int):
    # Newton on P_n from Chebyshev-like initial guesses; all roots at once
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(_NEWTON_MAX_ITER):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    else:
        raise ConvergenceError(f"Legendre root iteration did not converge for n={n}")
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped onto [a, b] (2 <= n <= 512)."""
    n = int(n)
    if not 2 <= n <= _GL_MAX_NODES:
        raise DomainError(f"gauss_legendre needs 2 <= n <= {_GL_MAX_NODES}, got {n}")
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"gauss_legendre needs a < b, got [{a}, {b}]")
    x, w = _legendre_reference(n)
    half = 0.5 * (b - a)
    nodes = _frozen(half * x + 0.5 * (a + b))
    weights = _frozen(half * w)
    return QuadratureRule(nodes, weights, (a, b))


# ---------------------------------------------------------------------------
# Finite-difference derivatives at the origin
# ---------------------------------------------------------------------------


def _difference(f, n, h, one_sided):
    if one_sided:
        # forward differences: error series in h, h^2, ...
        return sum((-1) ** (n - k) * math.comb(n, k) * f(k * h) for k in range(n + 1)) / h**n
    return sum((-1) ** k * math.comb(n, k) * f((n / 2 - k) * h) for k in range(n + 1)) / h**n


def derivative_at_zero(f, n: int = 1, h: float = 1e-2, levels: int = 3, one_sided: bool = False) -> float:
    """n-th derivative of ``f`` at 0 by finite differences with Richardson
    extrapolation over the steps h, 2h, 4h, ...

    Steps grow rather than shrink so round-off never exceeds that of the base
    step. Central differences have an even error series; ``one_sided`` uses
    forward differences for functions only defined on [0, inf).
    """
    n, levels = int(n), int(levels)
    if n < 1 or levels < 1:
        raise DomainError("derivative_at_zero needs n >= 1 and levels >= 1")
    table = [_difference(f, n, h * 2**k, one_sided) for k in range(levels)]
    order_step = 1 if one_sided else 2
    for j in range(1, levels):
        p = order_step * j
        # the column built from steps (2h, h) is weighted to cancel the h^p term
        table = [(2**p * table[k] - table[k + 1]) / (2**p - 1) for k in range(len(table) - 1)]
    return float(table[0])
