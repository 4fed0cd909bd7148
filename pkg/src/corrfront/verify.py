"""Quick self-checks run by ``corrfront verify``. Each check returns
(passed, detail); the suite prints one line per check."""

from __future__ import annotations

import math
import time

import numpy as np

from .errors import InstabilityError
from .initcond import front_coefficient, rescale_factors
from .lattice import FiniteRing, manybody_oracle, ring_correlation_matrix, wick_four_point
from .moments import first_moment_direct, generating_q, moments, window_index
from .rmt import fredholm_h, g_derivative_at_zero, g_goe, integrated_density, moment_combination_coefficients, tw1_cdf
from .specfun import airy_tail_integral, bessel_j_row, derivative_at_zero, gauss_legendre

__all__ = ["CHECKS", "run_checks"]


def _bessel_normalization():
    err = 0.0
    for x in (0.5, 7.0, 400.0):
        v = bessel_j_row(x, 10).values
        full = bessel_j_row(x, int(x + 20 * x ** (1 / 3)) + 60).values
        err = max(err, abs(full[0] + 2 * full[2::2].sum() - 1), abs(v[3] - full[3]))
    return err < 1e-13, f"max deviation {err:.2e}"


def _airy_tail():
    err = abs(airy_tail_integral(0.0) - 1.0 / 3.0)
    return err < 1e-12, f"|int_0^inf Ai - 1/3| = {err:.2e}"


def _gauss_legendre():
    rule = gauss_legendre(20, -1.0, 2.0)
    err = abs(rule.integrate(lambda x: x**39) - (2.0**40 - 1.0) / 40.0) / (2.0**40 / 40.0)
    return err < 1e-13, f"relative error on x^39: {err:.2e}"


def _wick():
    ring = FiniteRing(8)
    corr = ring_correlation_matrix(ring, "10", 0.8)
    points = [(0, 1, 2, 3), (1, 5, 4, 0), (2, 2, 6, 7), (7, 3, 3, 1)]
    brute = manybody_oracle(ring, "10", 0.8, points)
    err = max(abs(b - wick_four_point(corr, *q)) for b, q in zip(brute, points))
    return err < 1e-10, f"max four-point deviation {err:.2e}"


def _direct_sum():
    t = 50.0
    l = window_index(t, -2.0)
    err = abs(moments(t, l, 1)[1] - first_moment_direct(t, l))
    return err < 1e-9, f"|M1 - sum C| = {err:.2e}"


def _finite_difference():
    t = 50.0
    l = window_index(t, -2.0)
    m = moments(t, l, 3)
    worst = 0.0
    for n in (1, 2, 3):
        fd = derivative_at_zero(lambda lam: generating_q(lam, t, l), n)
        worst = max(worst, abs(fd / m[n] - 1))
    return worst < 1e-4, f"max relative deviation {worst:.2e} for n <= 3"


def _node_doubling():
    worst = 0.0
    for s in (-8.0, -2.0, 3.0):
        worst = max(worst, abs(fredholm_h(1.0, s, 64).value - fredholm_h(1.0, s, 128).value))
    return worst < 1e-8, f"max change {worst:.2e}"


def _tw1_limits():
    hi, lo = tw1_cdf(8.0), tw1_cdf(-11.0)
    ok = abs(hi - 1) < 1e-8 and lo < 1e-4
    return ok, f"F1(8) = {hi:.10f}, F1(-11) = {lo:.2e}"


def _derivative_identity():
    worst = 0.0
    for ensemble in ("GOE", "GSE"):
        worst = max(worst, abs(g_derivative_at_zero(ensemble, 0.0) + integrated_density(ensemble, 0.0)))
    return worst < 1e-5, f"max |dG/dlambda + int R1| = {worst:.2e}"


def _degeneration():
    err = abs(g_goe(1.0, -1.0) - tw1_cdf(-1.0))
    return err == 0.0, f"|G_GOE(1) - F1| = {err:.1e}"


def _combination():
    c = moment_combination_coefficients(1)
    return c == {1: 2, 2: -4}, f"n=1 coefficients {dict((k, str(v)) for k, v in c.items())}"


def _patterns():
    got = (front_coefficient("10"), front_coefficient("111000"), front_coefficient("1100"), rescale_factors("110100"))
    ok = got[0] == 0.5 and math.isclose(got[1], 1 / 6) and got[2] == 0.0 and np.allclose(got[3], (-3, 9))
    return ok, f"c(10)={got[0]}, c(111000)={got[1]:.6f}, c(1100)={got[2]}, A(110100)={got[3]}"


CHECKS = [
    ("bessel_normalization", _bessel_normalization),
    ("airy_tail_integral", _airy_tail),
    ("gauss_legendre_exactness", _gauss_legendre),
    ("wick_vs_manybody", _wick),
    ("first_moment_direct_sum", _direct_sum),
    ("moments_vs_finite_difference", _finite_difference),
    ("fredholm_node_doubling", _node_doubling),
    ("tw1_limits", _tw1_limits),
    ("rmt_derivative_identity", _derivative_identity),
    ("goe_degeneration", _degeneration),
    ("combination_coefficients", _combination),
    ("pattern_coefficients", _patterns),
]


def run_checks(stdout, verbose: bool = False) -> int:
    failed = unstable = 0
    for name, check in CHECKS:
        tic = time.perf_counter()
        try:
            ok, detail = check()
        except InstabilityError as exc:
            ok, detail = False, f"instability: {exc}"
            unstable += 1
        status = "PASS" if ok else "FAIL"
        failed += not ok
        extra = f" ({time.perf_counter() - tic:.2f}s)" if verbose else ""
        print(f"{status} {name}: {detail}{extra}", file=stdout)
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed", file=stdout)
    if unstable:
        return 2
    return 1 if failed else 0
