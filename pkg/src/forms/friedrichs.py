"""
Friedrichs form Q^(F)[phi] = int |(-i grad + A_alpha + S) phi|^2 by polar quadrature.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.fields.potentials import PerturbationField
from src.forms.polar_functions import PolarFunction, PolarSample
from src.utils.errors import InsufficientDecayError, ValidationError
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)


def decay_threshold(alpha: float) -> float:
    """Smallest declared vanishing rate accepted by the Friedrichs form."""
    return min(alpha, 1.0 - alpha) if alpha > 0.0 else 0.0


def covariant_gradient(sample: PolarSample, R: np.ndarray, alpha: float,
                       s_r: Optional[np.ndarray] = None,
                       s_t: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polar components of (-i grad + A_alpha + S) applied to a sampled function.

    Args:
        sample: Function with its polar gradient
        R: Radii, broadcastable against the sample
        alpha: Flux; A_alpha = (alpha / r) theta_hat
        s_r: Radial component of S (omit for S = 0)
        s_t: Angular component of S

    Returns:
        (D_r, D_theta)
    """
    d_r = -1j * sample.d_r
    d_t = -1j * sample.d_t + (alpha / R) * sample.value
    if s_r is not None:
        d_r = d_r + s_r * sample.value
    if s_t is not None:
        d_t = d_t + s_t * sample.value
    return d_r, d_t


def _form_value(phi: PolarFunction, alpha: float, field: PerturbationField,
                grid: PolarGrid) -> float:
    if not 0.0 <= alpha < 1.0:
        raise ValidationError(f"alpha must lie in [0,1), got {alpha}", key="alpha")
    R, T = grid.R, grid.T
    sample = phi.sample(R, T)
    s_r, s_t = field.polar(R, T)
    d_r, d_t = covariant_gradient(sample, R, alpha, s_r, s_t)
    value = grid.integrate(np.abs(d_r) ** 2 + np.abs(d_t) ** 2)
    logger.debug("friedrichs form (%s, alpha=%g): %.17g", phi.kind, alpha, value)
    return value


def friedrichs_form(phi: PolarFunction, alpha: float, field: PerturbationField,
                    grid: Optional[PolarGrid] = None) -> float:
    """
    Friedrichs quadratic form of a regular function.

    Args:
        phi: Regular part with declared vanishing rate
        alpha: Reduced flux in [0, 1)
        field: Regular perturbation S
        grid: Polar quadrature grid (default PolarGrid())

    Returns:
        The non-negative form value

    Raises:
        InsufficientDecayError: If the declared rate is below min(alpha, 1 - alpha)
            or the quadrature detects a non-integrable singularity
    """
    threshold = decay_threshold(alpha)
    if phi.vanishing_rate < threshold - 1e-12:
        raise InsufficientDecayError(
            f"declared rate {phi.vanishing_rate:g} below {threshold:g}", key="phi")
    value = _form_value(phi, alpha, field, PolarGrid() if grid is None else grid)
    if math.isinf(value):
        raise InsufficientDecayError("form integral diverges at the origin", key="phi")
    return value


def extended_friedrichs_form(phi: PolarFunction, alpha: float, field: PerturbationField,
                             grid: Optional[PolarGrid] = None) -> float:
    """The Friedrichs form extended to L^2: +inf outside the form domain."""
    if phi.vanishing_rate < decay_threshold(alpha) - 1e-12:
        return math.inf
    return _form_value(phi, alpha, field, PolarGrid() if grid is None else grid)


def form_domain_check(phi: PolarFunction, grid: Optional[PolarGrid] = None
                      ) -> Tuple[float, float]:
    """
    Form-domain asymptotics at the innermost quadrature radius.

    Returns:
        (<|phi|^2>(r), r^2 <|d_r phi|^2>(r)); both tend to 0 for phi in the domain
    """
    grid = PolarGrid() if grid is None else grid
    r = grid.r[:1, None]
    sample = phi.sample(r, grid.T)
    mean_value = float(np.mean(np.abs(sample.value) ** 2))
    mean_slope = float(np.mean(np.abs(sample.d_r) ** 2))
    return mean_value, float(r[0, 0]) ** 2 * mean_slope


def l2_norm_squared(func: PolarFunction, grid: Optional[PolarGrid] = None) -> float:
    grid = PolarGrid() if grid is None else grid
    return grid.integrate(func.sample(grid.R, grid.T).squared_modulus())
