"""Correlation fronts of free fermions after a quench and their soft-edge
random-matrix statistics."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConvergenceError,
    CorrFrontError,
    DomainError,
    InstabilityError,
    NumericalWarning,
)
from .initcond import admits_rmt_front, front_coefficient, pattern_report, rescale_factors
from .lattice import ALTERNATING, PeriodicPattern, correlator, kernel_matrix
from .moments import FrontWindow, MomentTable, generating_q, lattice_g1, lattice_g2, moments, window_index
from .rmt import fredholm_h, g_goe, g_gse, predicted_moment, r1, tw1_cdf
