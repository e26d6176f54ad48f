"""
Gamma function at real arguments.

Lanczos approximation (g = 7, nine coefficients) for x >= 1/2 and the
reflection formula below that. Relative accuracy is about 1e-15.
"""

import math

from src.utils.errors import PoleError

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(z: float) -> float:
    total = _LANCZOS_COEFFS[0]
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        total += coeff / (z + i)
    return total


def log_gamma(x: float) -> float:
    """
    Natural logarithm of Gamma(x) for x > 0.

    Args:
        x: Positive real argument

    Returns:
        log Gamma(x)
    """
    if x <= 0.0:
        raise PoleError(f"log_gamma needs x > 0, got {x}", key="log_gamma")
    if x < 0.5:
        # Gamma(x) = pi / (sin(pi x) Gamma(1 - x)), all factors positive here
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def gamma_fn(x: float) -> float:
    """
    Gamma(x) for real x outside the poles {0, -1, -2, ...}.

    Args:
        x: Real argument

    Returns:
        Gamma(x)

    Raises:
        PoleError: If x is a non-positive integer
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}", key="gamma_fn")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    return math.exp(log_gamma(x))
