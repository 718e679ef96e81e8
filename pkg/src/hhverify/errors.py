"""Exception types raised by the verification engine.

Every failure mode that callers are expected to branch on gets its own class;
all of them derive from :class:`VerificationError` so a campaign can catch the
lot in one place.
"""

from __future__ import annotations


class VerificationError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteInputError(VerificationError):
    """An input matrix or scalar contains NaN or infinity."""


class NonFiniteSampleError(VerificationError):
    """An integrand produced a non-finite value at a quadrature node."""


class ConvergenceError(VerificationError):
    """The eigensolver failed to converge."""


class AsymmetricInputError(VerificationError):
    """A matrix violated the symmetry tolerance of a symmetric operation."""


class DomainViolationError(VerificationError):
    """A point (or eigenvalue) lies outside a function's domain."""


class DimMismatchError(VerificationError):
    """Operands have incompatible shapes."""


class NotSquareError(VerificationError):
    """A square matrix was required."""


class NotPositiveDefiniteError(VerificationError):
    """A positive definite matrix was required."""


class NotPositiveSemidefiniteError(VerificationError):
    """A positive semidefinite matrix was required."""


class SingularPowerError(VerificationError):
    """A negative power of a singular matrix was requested."""


class NonPositiveInputError(VerificationError):
    """A strictly positive scalar input was required."""


class NodeCountError(VerificationError):
    """Quadrature node count outside the supported range."""


class SchattenOrderError(VerificationError):
    """Schatten order p < 1 (or Ky Fan k < 1) was requested."""


class BadRangeError(VerificationError):
    """An invalid (lo, hi) range was passed to a sampler."""


class DegenerateIntervalError(VerificationError):
    """A chain variant was asked for on an empty or degenerate interval."""


class UnknownTheoremError(VerificationError):
    """A campaign referenced a theorem id that is not registered."""


class ConfigError(VerificationError):
    """A campaign configuration could not be parsed or validated."""
