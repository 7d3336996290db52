"""Exception types shared across the library.

Two failure classes are distinguished because the command line maps them
to different exit codes: bad inputs (exit 2) versus numerical breakdown
of a solver or quadrature (exit 3).
"""


class LevyspecError(Exception):
    """Base class for all library errors."""


class PreconditionError(LevyspecError, ValueError):
    """An argument violates a documented precondition."""


class NumericError(LevyspecError, ArithmeticError):
    """A solver, quadrature, or bracketing step failed to converge.

    The message carries the achieved residual or error estimate so a
    caller can report diagnostics instead of a bare failure.
    """
