"""Graded cell-centred radial grid on [0, r_max]."""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.utils.constants import SPECTRAL_GRADING, SPECTRAL_MIN_N, SPECTRAL_N, SPECTRAL_R_MAX
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def graded_points(r_max: float, n: int, grading: float):
    """Cell faces rho_j = r_max (j/n)^p and nodes r_i = r_max ((i - 1/2)/n)^p."""
    faces = r_max * (np.arange(n + 1) / n) ** grading
    nodes = r_max * ((np.arange(1, n + 1) - 0.5) / n) ** grading
    return faces, nodes


@dataclass(frozen=True)
class RadialGrid:
    """
    n cells clustering at the origin like t^grading.

    Attributes:
        r_max: Outer radius, where the Dirichlet condition sits
        n: Number of cells (and nodes)
        grading: Clustering exponent p >= 1
    """

    r_max: float = SPECTRAL_R_MAX
    n: int = SPECTRAL_N
    grading: float = SPECTRAL_GRADING
    faces: np.ndarray = field(init=False, repr=False, compare=False)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.r_max > 0.0:
            raise ValidationError(f"r_max must be positive, got {self.r_max}", key="r_max")
        if self.n < SPECTRAL_MIN_N:
            raise ValidationError(f"need n >= {SPECTRAL_MIN_N}, got {self.n}", key="n")
        if self.grading < 1.0:
            raise ValidationError(f"grading must be >= 1, got {self.grading}", key="grading")
        faces, nodes = graded_points(self.r_max, self.n, self.grading)
        if nodes[0] > 1e-4 * self.r_max:
            raise ValidationError(
                f"first node {nodes[0]:.3g} exceeds 1e-4 * r_max; raise n or grading",
                key="grading")
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "nodes", nodes)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.r_max, self.n * factor, self.grading)

    def cell_volumes(self) -> np.ndarray:
        """int r dr over every cell, the L^2(r dr) quadrature weights."""
        return 0.5 * (self.faces[1:] ** 2 - self.faces[:-1] ** 2)

    def norm(self, values: np.ndarray) -> float:
        """L^2(r dr) norm of a grid function."""
        return float(np.sqrt(np.sum(np.abs(values) ** 2 * self.cell_volumes())))
