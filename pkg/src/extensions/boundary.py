"""
Boundary traces of regular parts at the origin.

For a mode profile f(r) = <e^{-ik theta} phi>(r) with nu = |k + alpha|:

    trace          lim (nu f + r f') / r^nu        (coefficient of r^nu, times 2 nu)
    singular trace lim r^nu (nu f - r f') / (2 nu) (coefficient of r^-nu)

Both limits are taken on a geometric radius sequence and accelerated with
repeated Aitken extrapolation. The leading correction of the trace samples
goes like r^(2 - 2 nu), so its exponent moves with the flux; Aitken estimates
the ratio from the data, while ``richardson_extrapolate`` assumes r^2.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from src.forms.polar_functions import PolarFunction
from src.utils.constants import (
    DEFAULT_TOLERANCES,
    GRID_N_THETA,
    TRACE_RATIO,
    TRACE_SMALLEST_RADIUS,
    TRACE_START_RADIUS,
    Tolerances,
)
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)

ModeProfile = Callable[[np.ndarray], Union[np.ndarray, Tuple[np.ndarray, np.ndarray]]]


@dataclass(frozen=True)
class TraceResult:
    value: complex
    error: float
    converged: bool


def trace_radii(start: float = TRACE_START_RADIUS, ratio: float = TRACE_RATIO,
                smallest: float = TRACE_SMALLEST_RADIUS) -> np.ndarray:
    """Decreasing geometric radii from ``start`` until one is <= ``smallest``."""
    radii = [start]
    while radii[-1] > smallest:
        radii.append(radii[-1] * ratio)
    return np.asarray(radii)


def _check_radii(r_grid: np.ndarray, smallest: float):
    if r_grid.ndim != 1 or r_grid.size < 5:
        raise ValidationError("need at least 5 radii", key="r_grid")
    if np.any(r_grid <= 0.0) or np.any(np.diff(r_grid) >= 0.0):
        raise ValidationError("radii must be positive and decreasing", key="r_grid")
    ratios = r_grid[1:] / r_grid[:-1]
    if np.max(np.abs(ratios - ratios[0])) > 1e-9 * ratios[0]:
        raise ValidationError("radii must form a geometric sequence", key="r_grid")
    if r_grid[-1] > smallest * (1.0 + 1e-12):
        raise ValidationError(f"smallest radius must be <= {smallest:g}", key="r_grid")


def mode_average(func: PolarFunction, k: int, n_theta: int = GRID_N_THETA) -> ModeProfile:
    """Profile r -> (<e^{-ik theta} phi>(r), <e^{-ik theta} d_r phi>(r)) of a closure."""
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    weight = np.exp(-1j * k * theta)[None, :]

    def profile(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        sample = func.sample(r[:, None], theta[None, :])
        return (np.mean(sample.value * weight, axis=1), np.mean(sample.d_r * weight, axis=1))

    return profile


def _profile_values(phi_mode: ModeProfile, r: np.ndarray,
                    derivative: Optional[Callable]) -> Tuple[np.ndarray, np.ndarray]:
    result = phi_mode(r)
    if isinstance(result, tuple):
        return np.asarray(result[0]), np.asarray(result[1])
    f = np.asarray(result)
    if derivative is not None:
        return f, np.asarray(derivative(r))
    h = 1e-4
    upper = np.asarray(phi_mode(r * (1.0 + h)))
    lower = np.asarray(phi_mode(r * (1.0 - h)))
    df = (upper - lower) / (2.0 * h * r)
    return f, df


def aitken_extrapolate(sequence: Sequence[complex], levels: int = 2) -> Tuple[complex, float]:
    """
    Repeated Aitken delta-squared extrapolation.

    Returns:
        (limit estimate, |difference of the last two extrapolants|)
    """
    values = np.asarray(sequence, dtype=complex)
    for _ in range(levels):
        if values.size < 4:
            break
        d1 = values[1:-1] - values[:-2]
        d2 = values[2:] - values[1:-1]
        denominator = d2 - d1
        scale = np.max(np.abs(values))
        safe = np.abs(denominator) > 1e-14 * max(scale, 1e-300)
        correction = np.where(safe, d2 * d2 / np.where(safe, denominator, 1.0), 0.0)
        values = values[2:] - correction
    return complex(values[-1]), float(abs(values[-1] - values[-2]))


def richardson_extrapolate(sequence: Sequence[complex], ratio: float = TRACE_RATIO,
                           order: int = 2, levels: int = 2) -> Tuple[complex, float]:
    """
    Richardson extrapolation for samples taken at radii r_0, ratio r_0, ...

    Level j removes a correction proportional to r^(order (j + 1)).

    Returns:
        (limit estimate, |difference of the last two extrapolants|)
    """
    values = np.asarray(sequence, dtype=complex)
    for level in range(levels):
        if values.size < 3:
            break
        factor = ratio ** (order * (level + 1))
        values = (values[1:] - factor * values[:-1]) / (1.0 - factor)
    return complex(values[-1]), float(abs(values[-1] - values[-2]))


EXTRAPOLATORS = ("aitken", "richardson")


def _extrapolate(samples: np.ndarray, r: np.ndarray, levels: int, method: str,
                 tolerances: Tolerances) -> TraceResult:
    if method not in EXTRAPOLATORS:
        raise ValidationError(f"unknown extrapolation method {method!r}", key="method")
    if method == "richardson":
        value, error = richardson_extrapolate(samples, r[1] / r[0], levels=levels)
    else:
        value, error = aitken_extrapolate(samples, levels)
    if not np.isfinite(value):
        return TraceResult(value, float("inf"), False)
    converged = error < tolerances.trace_convergence * (1.0 + abs(value))
    logger.debug("trace %.12g%+.12gi, error %.3g", value.real, value.imag, error)
    return TraceResult(value, error, converged)


def boundary_trace(phi_mode: ModeProfile, k: int, alpha: float,
                   r_grid: Optional[Sequence[float]] = None,
                   derivative: Optional[Callable] = None, order: int = 2,
                   method: str = "aitken",
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> TraceResult:
    """
    Extrapolated trace lim (nu f + r f') / r^nu of a mode profile.

    Args:
        phi_mode: r -> f(r), or r -> (f, f')
        k: Angular channel
        alpha: Reduced flux
        r_grid: Decreasing geometric radii with smallest <= 1e-5
        derivative: r -> f'(r) when phi_mode returns values only
        order: Number of extrapolation levels
        method: "aitken", or "richardson" for an r^2 leading correction
        tolerances: Supplies the convergence threshold

    Returns:
        TraceResult; converged is False when the sequence does not settle
    """
    r = trace_radii() if r_grid is None else np.asarray(r_grid, dtype=float)
    _check_radii(r, TRACE_SMALLEST_RADIUS)
    nu = abs(k + alpha)
    f, df = _profile_values(phi_mode, r, derivative)
    samples = (nu * f + r * df) / r ** nu
    return _extrapolate(samples, r, order, method, tolerances)


def singular_trace(phi_mode: ModeProfile, k: int, alpha: float,
                   r_grid: Optional[Sequence[float]] = None,
                   derivative: Optional[Callable] = None, order: int = 2,
                   method: str = "aitken",
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> TraceResult:
    """Extrapolated coefficient of r^-nu; zero for functions in the Friedrichs domain."""
    r = trace_radii() if r_grid is None else np.asarray(r_grid, dtype=float)
    _check_radii(r, TRACE_SMALLEST_RADIUS)
    nu = abs(k + alpha)
    if nu == 0.0:
        raise ValidationError("singular trace undefined for k + alpha = 0", key="alpha")
    f, df = _profile_values(phi_mode, r, derivative)
    samples = r ** nu * (nu * f - r * df) / (2.0 * nu)
    return _extrapolate(samples, r, order, method, tolerances)
