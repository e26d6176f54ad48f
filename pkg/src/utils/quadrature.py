"""
Polar product quadrature.

Angular trapezoid rule times Gauss-Legendre panels in r. The panels are
graded geometrically toward the origin down to ``r_min``; the remaining
disk [0, r_min] is closed with a power law fitted to the innermost panel,
which also detects non-integrable r^-1 behaviour.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.utils.constants import (
    GRID_N_THETA,
    GRID_ORDER,
    GRID_OUTER_WIDTH,
    GRID_R_MAX,
    GRID_R_MIN,
    GRID_RATIO,
    GRID_REFINED_ORDER,
    GRID_SPLIT,
    TAIL_CANCELLATION,
    TAIL_DIVERGENCE_MARGIN,
)
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]


def panel_breaks(r_max: float, breakpoints: Sequence[float] = (),
                 ratio: float = GRID_RATIO, r_min: float = GRID_R_MIN,
                 split: float = GRID_SPLIT,
                 outer_width: float = GRID_OUTER_WIDTH) -> np.ndarray:
    """
    Panel edges: geometric below ``split``, uniform above, plus breakpoints.

    Args:
        r_max: Outer radius of the grid
        breakpoints: Radii where the integrand has kinks (cutoff radii, ...)
        ratio: Geometric grading ratio toward the origin
        r_min: Innermost panel edge
        split: Radius where the geometric grading starts
        outer_width: Maximum panel width above ``split``

    Returns:
        Sorted array of panel edges
    """
    if not 0.0 < ratio < 1.0:
        raise ValidationError(f"grading ratio must lie in (0,1), got {ratio}", key="ratio")
    if not 0.0 < r_min < split < r_max:
        raise ValidationError(
            f"need 0 < r_min < split < r_max, got {r_min}, {split}, {r_max}", key="r_max")

    edges = [split]
    r = split
    while r * ratio > r_min:
        r *= ratio
        edges.append(r)
    edges.append(r_min)

    n_outer = int(math.ceil((r_max - split) / outer_width))
    edges.extend(np.linspace(split, r_max, n_outer + 1))
    edges.extend(b for b in breakpoints if r_min < b < r_max)

    ordered = np.unique(np.asarray(edges, dtype=float))
    kept = [ordered[0]]
    for edge in ordered[1:]:
        if edge - kept[-1] > 1e-12 * edge:
            kept.append(edge)
    return np.asarray(kept)


def gauss_panels(breaks: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on every panel of ``breaks``."""
    x, w = leggauss(order)
    lo = breaks[:-1, None]
    hi = breaks[1:, None]
    nodes = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w[None, :]
    return nodes.ravel(), weights.ravel()


@dataclass
class PolarGrid:
    """Quadrature nodes on [r_min, r_max] x [0, 2pi) with a fitted inner tail."""

    r_max: float = GRID_R_MAX
    breakpoints: Tuple[float, ...] = ()
    order: int = GRID_ORDER
    n_theta: int = GRID_N_THETA
    ratio: float = GRID_RATIO
    r_min: float = GRID_R_MIN
    split: float = GRID_SPLIT
    outer_width: float = GRID_OUTER_WIDTH
    breaks: np.ndarray = field(init=False, repr=False)
    r: np.ndarray = field(init=False, repr=False)
    w: np.ndarray = field(init=False, repr=False)
    theta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_theta < 8:
            raise ValidationError(f"n_theta must be >= 8, got {self.n_theta}", key="n_theta")
        self.breakpoints = tuple(sorted(float(b) for b in self.breakpoints))
        self.breaks = panel_breaks(self.r_max, self.breakpoints, self.ratio,
                                   self.r_min, self.split, self.outer_width)
        self.r, self.w = gauss_panels(self.breaks, self.order)
        self.theta = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        logger.debug("polar grid: %d panels x %d nodes, %d angles",
                     len(self.breaks) - 1, self.order, self.n_theta)

    @property
    def R(self) -> np.ndarray:
        """Radii as a column, shape (nr, 1)."""
        return self.r[:, None]

    @property
    def T(self) -> np.ndarray:
        """Angles as a row, shape (1, nt)."""
        return self.theta[None, :]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.r.size, self.theta.size)

    def cartesian(self) -> Tuple[np.ndarray, np.ndarray]:
        """Cartesian coordinates of every node, each of shape (nr, nt)."""
        return self.R * np.cos(self.T), self.R * np.sin(self.T)

    def refined(self) -> "PolarGrid":
        """Same panels with a higher Gauss-Legendre order."""
        return PolarGrid(self.r_max, self.breakpoints, GRID_REFINED_ORDER, self.n_theta,
                         self.ratio, self.r_min, self.split, self.outer_width)

    def with_breakpoints(self, *extra: float) -> "PolarGrid":
        return PolarGrid(self.r_max, self.breakpoints + tuple(extra), self.order, self.n_theta,
                         self.ratio, self.r_min, self.split, self.outer_width)

    def mask(self, lo: float = 0.0, hi: float = math.inf) -> np.ndarray:
        """Indicator of lo <= r < hi as a column."""
        return (self.R >= lo) & (self.R < hi)

    def angular_mean(self, values) -> np.ndarray:
        """Trapezoid angular average at every radial node."""
        return np.broadcast_to(values, self.shape).mean(axis=1)

    def integrate(self, values, tail: bool = True) -> Scalar:
        """
        Integrate a sampled function over the plane.

        Args:
            values: Samples broadcastable to (nr, nt)
            tail: Add the fitted contribution of the disk [0, r_min]

        Returns:
            The integral; +inf when the inner behaviour is not integrable
        """
        values = np.broadcast_to(values, self.shape)
        h = 2.0 * np.pi * self.angular_mean(values) * self.r
        body = np.sum(self.w * h)
        if tail:
            inner = self._power_tail(h, values)
            if math.isinf(abs(inner)):
                return math.inf if np.isrealobj(h) else complex(math.inf, 0.0)
            body = body + inner
        return complex(body) if np.iscomplexobj(h) else float(body)

    def _power_tail(self, h: np.ndarray, values: np.ndarray) -> Scalar:
        inner = [0, self.order - 1]
        r_a, r_b = self.r[inner]
        h_a, h_b = h[inner]
        modulus = 2.0 * np.pi * np.abs(values[inner]).mean(axis=1) * self.r[inner]
        # angular cancellation down to rounding: the disk contributes nothing
        if np.any(np.abs(h[inner]) <= TAIL_CANCELLATION * modulus):
            return 0.0
        exponent = math.log(abs(h_b) / abs(h_a)) / math.log(r_b / r_a)
        if exponent <= -1.0 + TAIL_DIVERGENCE_MARGIN:
            logger.debug("inner tail diverges, fitted exponent %.6f", exponent)
            return math.inf
        r0 = self.breaks[0]
        return h_a * (r0 / r_a) ** exponent * r0 / (exponent + 1.0)
