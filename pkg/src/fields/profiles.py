"""
Radial profiles: the cutoff chi and the recovery profile eta.

The cutoff bridge on [a, b] is the quintic smoothstep, the minimal-degree
polynomial with matching value, slope and curvature at both ends.

The recovery profile is (r / sqrt(alpha))^alpha on [0, sqrt(alpha)] and
identically 1 beyond. Since the power branch already reaches 1 at
sqrt(alpha), the constant is the only monotone, concave continuation with
values in [0, 1]; eta is Lipschitz with a concave kink at sqrt(alpha).
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.utils.errors import ValidationError

ArrayLike = Union[float, np.ndarray]


def _out(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


@dataclass(frozen=True)
class Cutoff:
    """Radial C^2 cutoff: 1 on [0, a], 0 on [b, inf)."""

    a: float = 1.0
    b: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.a < self.b:
            raise ValidationError(f"cutoff needs 0 < a < b, got a={self.a}, b={self.b}",
                                  key="cutoff")

    @property
    def width(self) -> float:
        return self.b - self.a

    def evaluate(self, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        """
        Value and first two radial derivatives.

        Args:
            r: Radii (scalar or array)

        Returns:
            (chi, chi', chi'')
        """
        scalar = np.ndim(r) == 0
        r = np.asarray(r, dtype=float)
        t = np.clip((r - self.a) / self.width, 0.0, 1.0)
        inside = (r > self.a) & (r < self.b)
        value = 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t * t)
        first = np.where(inside, -30.0 * t * t * (1.0 - t) ** 2 / self.width, 0.0)
        second = np.where(inside, -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / self.width ** 2, 0.0)
        return _out(value, scalar), _out(first, scalar), _out(second, scalar)

    def laplacian(self, r: ArrayLike) -> ArrayLike:
        """Delta chi = chi'' + chi'/r for the radial cutoff."""
        _, first, second = self.evaluate(r)
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0.0, r, 1.0)
        result = second + np.where(r > 0.0, first / safe, 0.0)
        return float(result) if np.ndim(result) == 0 else result


def cutoff_eval(cutoff: Cutoff, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    return cutoff.evaluate(r)


@dataclass(frozen=True)
class RecoveryProfile:
    """Profile eta turning an H^1 function into a finite-energy state for flux alpha_n."""

    alpha_n: float

    def __post_init__(self):
        if not 0.0 < self.alpha_n < 1.0:
            raise ValidationError(f"alpha_n must lie in (0,1), got {self.alpha_n}",
                                  key="alpha_n")

    @property
    def inner_radius(self) -> float:
        return math.sqrt(self.alpha_n)

    @property
    def outer_radius(self) -> float:
        return 2.0 * math.sqrt(self.alpha_n)

    def evaluate(self, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """
        Value and derivative of eta.

        The derivative at r = sqrt(alpha_n) is the left derivative of the
        power branch.
        """
        scalar = np.ndim(r) == 0
        r = np.asarray(r, dtype=float)
        a = self.alpha_n
        root = self.inner_radius
        inner = r <= root
        ratio = np.where(inner, r / root, 1.0)
        value = np.where(inner, ratio ** a, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.where(inner & (r > 0.0), a / root * ratio ** (a - 1.0), 0.0)
        slope = np.where(inner & (r == 0.0), np.inf, slope)
        return _out(value, scalar), _out(slope, scalar)


def eta_eval(profile: RecoveryProfile, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    return profile.evaluate(r)
