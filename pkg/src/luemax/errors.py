"""Exception types shared across the package.

The CLI maps these onto process exit codes: domain errors exit with 2,
conditioning and precision problems with 3, convergence failures with 4.
"""


class LuemaxError(Exception):
    """Base class for package-specific errors."""

    exit_code = 1


class DomainError(LuemaxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class CapabilityError(DomainError):
    """A request exceeds the documented operating envelope of a routine."""


class ConditioningError(LuemaxError, ArithmeticError):
    """A computation failed for conditioning reasons, e.g. a Gram matrix
    that should be positive definite came out otherwise."""

    exit_code = 3


class PrecisionError(LuemaxError, ArithmeticError):
    """Working precision was insufficient for a trustworthy result."""

    exit_code = 3


class ConvergenceError(LuemaxError, ArithmeticError):
    """An iterative or discretized computation failed its convergence check."""

    exit_code = 4
