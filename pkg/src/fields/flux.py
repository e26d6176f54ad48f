"""Aharonov-Bohm flux normalization and the singular potential A_alpha."""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.utils.errors import OriginSingularityError, TrivialFluxError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class FluxParameter:
    """
    Normalized flux alpha in (0, 1) with the data needed to undo the reduction.

    The raw flux is recovered as sign * (2 * ell + alpha) with sign = -1
    when the complex conjugation was applied.
    """

    alpha: float
    ell: int
    conjugated: bool

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise TrivialFluxError(f"alpha must lie in (0,1), got {self.alpha}", key="alpha")

    @property
    def raw(self) -> float:
        sign = -1.0 if self.conjugated else 1.0
        return sign * (2 * self.ell + self.alpha)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "ell": self.ell, "conjugated": self.conjugated}


def reduce_flux(raw: float) -> FluxParameter:
    """
    Reduce an arbitrary flux to alpha in (0, 1).

    raw = 2 ell' + a with |a| < 1 (the even part is removed by the singular
    gauge e^{2 i ell' theta}); a < 0 is mapped to -a by complex conjugation.

    Args:
        raw: Flux in units of the flux quantum

    Returns:
        The reduced FluxParameter

    Raises:
        TrivialFluxError: If raw is an integer (no residual flux in (0, 1))
    """
    raw = float(raw)
    if not math.isfinite(raw):
        raise TrivialFluxError(f"flux must be finite, got {raw}", key="raw")
    if raw == math.floor(raw):
        raise TrivialFluxError(f"integer flux {raw:g} is gauge equivalent to no flux", key="raw")
    ell = int(round(raw / 2.0))
    remainder = raw - 2 * ell
    if remainder < 0.0:
        return FluxParameter(alpha=-remainder, ell=-ell, conjugated=True)
    return FluxParameter(alpha=remainder, ell=ell, conjugated=False)


def a_alpha_eval(alpha: float, x: ArrayLike, y: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    Aharonov-Bohm vector potential alpha * x_perp / |x|^2 with x_perp = (-y, x).

    Args:
        alpha: Flux parameter
        x: First coordinate(s)
        y: Second coordinate(s)

    Returns:
        Components (A_x, A_y)

    Raises:
        OriginSingularityError: If any point is the origin
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r_sq = x * x + y * y
    if np.any(r_sq == 0.0):
        raise OriginSingularityError("A_alpha is singular at the origin", key="a_alpha_eval")
    ax = -alpha * y / r_sq
    ay = alpha * x / r_sq
    if ax.ndim == 0:
        return float(ax), float(ay)
    return ax, ay
