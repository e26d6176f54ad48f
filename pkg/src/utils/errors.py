"""
Exception and warning hierarchy.

Validation errors map to CLI exit code 2, numerical errors to exit code 3.
"""

from typing import Optional


class AbqError(Exception):
    """Base class for every error raised by the library."""

    exit_code = 1

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        if key:
            message = f"[{key}] {message}"
        super().__init__(message)


class ValidationError(AbqError):
    """Input outside the admissible range."""

    exit_code = 2


class ConfigError(ValidationError):
    """Malformed or unknown configuration entry."""


class PoleError(ValidationError):
    """Gamma function evaluated at a non-positive integer."""


class DomainError(ValidationError):
    """Argument outside the domain of a special function."""


class TrivialFluxError(ValidationError):
    """Flux reduces to an integer, i.e. no Aharonov-Bohm effect."""


class OriginSingularityError(ValidationError):
    """Evaluation requested at the origin, where the quantity is singular."""


class ProfileError(ValidationError):
    """Field profile violates its hypotheses."""


class AsymptoticRangeError(ValidationError):
    """Small-distance expansion requested outside lambda*r < 1."""


class InsufficientDecayError(ValidationError):
    """Regular part does not vanish fast enough at the origin."""


class NonAzimuthalFieldError(ValidationError):
    """Operation needs an azimuthal field."""


class NumericalError(AbqError):
    """A numerical procedure failed to reach its tolerance."""

    exit_code = 3


class NonConvergenceError(NumericalError):
    """Iterative or adaptive procedure did not converge."""


class QuadratureBudgetError(NumericalError):
    """Quadrature error estimate exceeds the allowed budget."""


class SingularExtensionError(NumericalError):
    """Extension matrix is numerically singular."""


class DivergentIntegralError(NumericalError):
    """An integral expected to be finite diverges."""


class BracketWarning(UserWarning):
    """Root bracket probably misses roots."""


class CoarseGridWarning(UserWarning):
    """Self-convergence probe indicates an under-resolved grid."""


class ConditioningWarning(UserWarning):
    """Linear system close to singular."""
