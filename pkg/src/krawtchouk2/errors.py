"""Exception types shared across the library.

Every error carries a stable machine-readable ``code`` so that callers
(notably the CLI) can map failures to exit statuses without parsing
messages.
"""

from __future__ import annotations


class ExactMathError(Exception):
    """Base class for all library errors."""

    code = "ERROR"


class ParameterError(ExactMathError, ValueError):
    """A parameter violates a documented precondition."""

    code = "BAD_PARAMETER"


class MalformedRationalError(ParameterError):
    code = "BAD_RATIONAL"


class GridRangeError(ParameterError):
    """A lattice point lies outside the triangular grid."""

    code = "GRID_RANGE"


class DeltaZeroError(ParameterError):
    """p1*p4 - p2*p3 = 0: the recurrence coefficients are undefined."""

    code = "DELTA_ZERO"


class SingularSystemError(ParameterError):
    """An exact linear system is singular beyond the expected degeneracy."""

    code = "SINGULAR_SYSTEM"


class BottomZeroError(ExactMathError, ZeroDivisionError):
    """A bottom-parameter Pochhammer factor hit zero on a surviving term."""

    code = "BOTTOM_ZERO"


class NonTerminatingError(ParameterError):
    """Exact summation was requested for a series that does not terminate."""

    code = "NON_TERMINATING"


class ConvergenceError(ExactMathError, ArithmeticError):
    """A floating-point iteration failed to converge within its budget."""

    code = "NO_CONVERGENCE"


class FloatOverflowError(ExactMathError, OverflowError):
    """An exact rational does not fit in a double."""

    code = "FLOAT_OVERFLOW"
