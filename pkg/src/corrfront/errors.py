"""Exception and warning types shared across the package."""


class CorrFrontError(Exception):
    """Base class for all package errors."""


class DomainError(CorrFrontError, ValueError):
    """An argument lies outside the supported domain."""


class ConvergenceError(CorrFrontError, RuntimeError):
    """An iterative routine failed to converge. Signals a defect, not bad input."""


class InstabilityError(CorrFrontError, ArithmeticError):
    """A numerical self-check (node doubling, truncation re-check) failed."""


class ConfigError(CorrFrontError, ValueError):
    """Invalid experiment configuration. Carries every problem found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NumericalWarning(UserWarning):
    """A result is numerically indistinguishable from zero or otherwise suspect."""
