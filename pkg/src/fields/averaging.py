"""Angular averages <f>(r) = (1/2pi) int f(r, theta) dtheta."""

import math
from typing import Callable

import numpy as np

from src.utils.constants import GRID_N_THETA
from src.utils.errors import ValidationError


def angular_average(f: Callable[[np.ndarray, np.ndarray], np.ndarray], r: float,
                    n_theta: int = GRID_N_THETA) -> complex:
    """
    Trapezoid average of f over the circle of radius r.

    Exact for trigonometric polynomials of degree below n_theta.

    Args:
        f: Vectorized map (r, theta) -> values
        r: Radius, r > 0
        n_theta: Number of equally spaced angles, at least 8

    Returns:
        The average as a complex number
    """
    if not r > 0.0:
        raise ValidationError(f"radius must be positive, got {r}", key="r")
    if n_theta < 8:
        raise ValidationError(f"n_theta must be >= 8, got {n_theta}", key="n_theta")
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    values = np.asarray(f(np.full(n_theta, float(r)), theta))
    return complex(np.mean(np.broadcast_to(values, theta.shape)))
