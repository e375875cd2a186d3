"""Exception types shared across the package.

The split mirrors how failures are reported: parameter/input problems are
ValueErrors, failures of the numerical machinery are RuntimeErrors.  The
command line maps the first group to exit code 1 and the second to 2.
"""


class EntnormsError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(EntnormsError, ValueError):
    """An argument is outside its documented domain."""


class DimensionError(ParameterError):
    """Shapes or subsystem dimensions are inconsistent or too large."""


class DegenerateInputError(EntnormsError, ValueError):
    """Input is degenerate for the requested operation (e.g. zero vector)."""


class PreconditionError(EntnormsError, ValueError):
    """A documented precondition (hermiticity, positivity, trace) fails."""


class NumericalError(EntnormsError, RuntimeError):
    """A dense kernel (svd/eig) failed to converge or produced garbage."""


class InfeasibleError(EntnormsError, RuntimeError):
    """A linear program could not be solved to feasibility."""
