"""Soft-edge random-matrix side: Airy-kernel Fredholm determinants, the GOE
Tracy-Widom CDF, GSE/GOE generating functions, one-point densities and the
moment predictions they imply.

    H(z, s) = det[1 - (z/2) Ai((x+y)/2)] on L^2(s, inf)
    G_GSE(lambda, s) = [H(sqrt(lambda), s) + H(-sqrt(lambda), s)] / 2
    G_GOE(lambda, s) = (1+r)/2 H(w, s) + (1-r)/2 H(-w, s),
        w = sqrt(lambda(2-lambda)), r = sqrt(lambda/(2-lambda))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, InstabilityError
from .specfun import airy_ai_array, airy_tail_integral_array, derivative_at_zero, gauss_legendre

__all__ = [
    "SoftEdgeDeterminant",
    "fredholm_h",
    "tw1_cdf",
    "g_gse",
    "g_goe",
    "g_derivative_at_zero",
    "r1",
    "r1_array",
    "integrated_density",
    "predicted_moment",
    "moment_combination_coefficients",
    "moment_combination_lhs",
    "ENSEMBLES",
]

ENSEMBLES = ("GOE", "GSE")
DEFAULT_NODES = 64
WINDOW = 40.0
S_MIN = -12.0
_DOUBLING_TOL = 1e-6
_PREDICTION_NODES = 128
_PREDICTION_WINDOW = 30.0


@dataclass(frozen=True)
class SoftEdgeDeterminant:
    z: float
    s: float
    value: float
    nodes_used: int


@lru_cache(maxsize=512)
def _airy_kernel(s: float, nodes: int, window: float) -> np.ndarray:
    rule = gauss_legendre(nodes, s, s + window)
    x, sw = rule.nodes, np.sqrt(rule.weights)
    k = 0.5 * sw[:, None] * airy_ai_array(0.5 * (x[:, None] + x[None, :]))[0] * sw[None, :]
    k.setflags(write=False)
    return k


def _h_value(z, s, nodes, window):
    if z == 0.0:
        return 1.0
    k = _airy_kernel(s, nodes, window)
    return float(np.linalg.det(np.eye(nodes) - z * k))


def fredholm_h(z: float, s: float, nodes: int = DEFAULT_NODES, window: float = WINDOW, check: bool = True):
    """H(z, s) by Nystrom discretisation on [s, s + window].

    With ``check`` the determinant is recomputed on twice as many nodes and an
    :class:`InstabilityError` is raised if the two differ by more than 1e-6.
    """
    z, s = float(z), float(s)
    if not abs(z) <= 4:
        raise DomainError(f"fredholm_h needs |z| <= 4, got {z}")
    if not s >= S_MIN:
        raise DomainError(f"fredholm_h needs s >= {S_MIN}, got {s}")
    nodes = int(nodes)
    value = _h_value(z, s, nodes, float(window))
    if check:
        finer = _h_value(z, s, 2 * nodes, float(window))
        if abs(finer - value) > _DOUBLING_TOL:
            raise InstabilityError(
                f"H({z}, {s}) moved by {abs(finer - value):.3g} when doubling {nodes} nodes"
            )
    return SoftEdgeDeterminant(z, s, value, nodes)


def tw1_cdf(s: float, nodes: int = DEFAULT_NODES) -> float:
    """GOE Tracy-Widom distribution F_1(s) = H(1, s)."""
    return fredholm_h(1.0, s, nodes).value


def g_gse(lam: float, s: float, nodes: int = DEFAULT_NODES) -> float:
    lam = float(lam)
    if not 0 <= lam <= 4:
        raise DomainError(f"g_gse needs 0 <= lambda <= 4, got {lam}")
    z = math.sqrt(lam)
    return 0.5 * fredholm_h(z, s, nodes).value + 0.5 * fredholm_h(-z, s, nodes).value


def g_goe(lam: float, s: float, nodes: int = DEFAULT_NODES) -> float:
    lam = float(lam)
    if not 0 <= lam < 2:
        raise DomainError(f"g_goe needs 0 <= lambda < 2, got {lam}")
    w = math.sqrt(lam * (2.0 - lam))
    r = math.sqrt(lam / (2.0 - lam))
    plus, minus = 0.5 * (1.0 + r), 0.5 * (1.0 - r)
    value = plus * fredholm_h(w, s, nodes).value
    if minus != 0.0:
        value += minus * fredholm_h(-w, s, nodes).value
    return value


def g_derivative_at_zero(ensemble: str, s: float, h: float = 1e-2, levels: int = 4) -> float:
    """dG/dlambda at 0 by one-sided differences with Richardson extrapolation."""
    g = {"GOE": g_goe, "GSE": g_gse}[_ensemble(ensemble)]
    return derivative_at_zero(lambda lam: g(lam, s), 1, h=h, levels=levels, one_sided=True)


def _ensemble(name) -> str:
    key = str(name).upper()
    if key not in ENSEMBLES:
        raise DomainError(f"unknown ensemble {name!r}, expected one of {ENSEMBLES}")
    return key


def r1_array(ensemble: str, x) -> np.ndarray:
    """One-point densities from Ai, Ai' and the tail integral (Ai'' = x Ai)."""
    key = _ensemble(ensemble)
    x = np.asarray(x, dtype=float)
    ai, aip = airy_ai_array(x)
    tail = airy_tail_integral_array(x)
    gse = 0.5 * aip**2 - 0.5 * x * ai**2 - 0.25 * ai * tail
    if key == "GSE":
        return gse
    return 2.0 * gse + 0.5 * ai


def r1(ensemble: str, x: float) -> float:
    x = float(x)
    if not -12 <= x <= 12:
        raise DomainError(f"r1 is supported on [-12, 12], got {x}")
    return float(np.ravel(r1_array(ensemble, x))[0])


def integrated_density(ensemble: str, s: float, nodes: int = _PREDICTION_NODES) -> float:
    """Integral of R_1 over [s, s + 30]; the remainder beyond is negligible."""
    s = float(s)
    if not s >= S_MIN:
        raise DomainError(f"integrated_density needs s >= {S_MIN}, got {s}")
    rule = gauss_legendre(nodes, s, s + _PREDICTION_WINDOW)
    return rule.integrate(lambda x: r1_array(ensemble, x))


def predicted_moment(n: int, s: float) -> float:
    """Large-t limit of M_n at rescaled position s, for n = 1, 2."""
    if n == 1:
        return 0.5 * integrated_density("GOE", s) - integrated_density("GSE", s)
    if n == 2:
        return -0.5 * integrated_density("GSE", s)
    raise DomainError(f"predicted_moment is available for n in {{1, 2}}, got {n}")


def moment_combination_coefficients(n: int) -> dict[int, Fraction]:
    """Exact coefficients c_j with sum_j c_j M_j equal to (-1)^n n! [lambda^n] G_2.

    Keys are moment orders 1..2n.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"combination order must be >= 1, got {n}")
    f = math.factorial
    coeffs: dict[int, Fraction] = {}
    for k in range(n // 2 + 1):
        num = (-1) ** (k + n) * 2 ** (3 * n - 4 * k) * f(n - k) * f(n)
        coeffs[2 * n - 2 * k] = Fraction(num, f(2 * n - 2 * k) * f(n - 2 * k) * f(k))
    for k in range((n - 1) // 2 + 1):
        num = (-1) ** (k + n) * Fraction(2) ** (3 * n - 4 * k - 2) * f(n - k - 1) * f(n)
        coeffs[2 * n - 2 * k - 1] = -num / (f(2 * n - 2 * k - 1) * f(n - 2 * k - 1) * f(k))
    return dict(sorted(coeffs.items()))


def moment_combination_lhs(n: int, moments) -> float:
    """Evaluate the order-n combination on a MomentTable or a sequence M_1, M_2, ..."""
    values = getattr(moments, "values", moments)
    values = list(values)
    coeffs = moment_combination_coefficients(n)
    needed = max(coeffs)
    if len(values) < needed:
        raise DomainError(f"order-{n} combination needs M_1..M_{needed}, got {len(values)} moments")
    return float(sum(c * Fraction(values[j - 1]) for j, c in coeffs.items()))
