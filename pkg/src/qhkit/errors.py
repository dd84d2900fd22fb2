"""Exception hierarchy shared by all qhkit modules."""

from __future__ import annotations


class QHError(Exception):
    """Base class for every error raised by qhkit."""


class DomainError(QHError, ValueError):
    """A point lies outside the domain of an operation (e.g. a real ``z``)."""


class ValidationError(QHError, ValueError):
    """Malformed input data (bad measure, bad JSON, bad expression)."""


class QuadratureError(QHError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes:
        estimate: best value obtained before giving up.
        error: error estimate attached to ``estimate``.
    """

    def __init__(self, message: str, estimate=None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class LimitDivergence(QHError, ArithmeticError):
    """An extrapolated limit did not settle along the refinement schedule."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class RootError(QHError, ArithmeticError):
    """Polynomial root iteration failed to converge."""


class PoleError(QHError, ZeroDivisionError):
    """Evaluation hit a pole of a rational function."""


class RecoveryError(QHError, RuntimeError):
    """Recovered data fails to reproduce the function on the validation grid."""

    def __init__(self, message: str, residual: float, residual_map=None, data=None):
        super().__init__(message)
        self.residual = residual
        self.residual_map = residual_map or []
        self.data = data


class ClassificationError(QHError, ValueError):
    """A rational pair violates one of the structural conditions for membership."""

    def __init__(self, message: str, condition: str, witness=None):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class BoundaryLimitError(QHError, ValueError):
    """Upper and lower non-tangential limits at a real point disagree."""

    def __init__(self, message: str, point: float, upper: complex, lower: complex):
        super().__init__(message)
        self.point = point
        self.upper = upper
        self.lower = lower
