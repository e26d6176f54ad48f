"""Resolvent of a mode operator and the alpha -> 0 resolvent sweep."""

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded

from src.spectral.mode_operator import Profile, assemble_mode_operator, eigenvalues, ModeOperator
from src.spectral.radial_grid import RadialGrid
from src.utils.constants import DEFAULT_RESOLVENT_Z, DEFAULT_TOLERANCES, Tolerances
from src.utils.errors import ConditioningWarning, NonConvergenceError, ValidationError

logger = logging.getLogger(__name__)


def _check_z(z: complex):
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise ValidationError(f"z must lie off [0, inf), got {z}", key="z")
    return z


def resolvent_apply(op: ModeOperator, z: complex, f: np.ndarray,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Solve (op - z) u = f for a radial grid function.

    The system is solved in the weighted unknown g = u / r^nu, where it is
    tridiagonal: (A - z W) g = W f / r^nu.

    Args:
        op: Mode operator
        z: Spectral parameter off [0, inf)
        f: Values at the grid nodes
        tolerances: Residual and near-spectrum thresholds

    Returns:
        u at the grid nodes

    Raises:
        NonConvergenceError: If the relative residual exceeds the tolerance

    Warns:
        ConditioningWarning: If z is within near_spectrum of the lowest eigenvalue
    """
    z = _check_z(z)
    f = np.asarray(f)
    if f.shape != op.nodes.shape:
        raise ValidationError(f"f must have shape {op.nodes.shape}, got {f.shape}", key="f")
    lowest = eigenvalues(op, 1)[0]
    if abs(lowest - z) < tolerances.near_spectrum * max(1.0, abs(lowest)):
        warnings.warn(f"z={z} is within {abs(lowest - z):.3g} of the spectrum",
                      ConditioningWarning)

    scale = op.nodes ** op.nu
    rhs = op.weights * f / scale
    bands = np.zeros((3, op.nodes.size), dtype=complex)
    bands[0, 1:] = -op.fluxes
    bands[1] = op.stiffness_diagonal - z * op.weights
    bands[2, :-1] = -op.fluxes
    g = solve_banded((1, 1), bands, rhs)

    residual = op.apply(g) - z * op.weights * g - rhs
    # measured in the weighted norm where the operator is symmetric
    relative = (np.linalg.norm(residual / np.sqrt(op.weights))
                / max(np.linalg.norm(rhs / np.sqrt(op.weights)), 1e-300))
    logger.debug("resolvent k=%d alpha=%g z=%s: residual %.3g", op.k, op.alpha, z, relative)
    if relative > tolerances.resolvent_residual:
        raise NonConvergenceError(f"resolvent residual {relative:.3g}", key="resolvent")
    u = scale * g
    return u if np.iscomplexobj(f) or z.imag != 0.0 else u.real


@dataclass(frozen=True)
class ResolventRow:
    alpha: float
    k: int
    n: int
    relative_error: float


@dataclass(frozen=True)
class ResolventStudy:
    rows: List[ResolventRow]
    reference_norm: float

    @property
    def errors(self) -> np.ndarray:
        return np.array([row.relative_error for row in self.rows])

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.errors) < 0.0))

    @property
    def reduction(self) -> float:
        """Last error over first error."""
        errors = self.errors
        return float(errors[-1] / errors[0])


def gaussian_source(r: np.ndarray) -> np.ndarray:
    return np.exp(-np.asarray(r, dtype=float) ** 2 / 2.0)


def resolvent_study(alphas: Sequence[float], k: int = 0, s_profile: Optional[Profile] = None,
                    z: complex = DEFAULT_RESOLVENT_Z,
                    f: Callable[[np.ndarray], np.ndarray] = gaussian_source,
                    grid: Optional[RadialGrid] = None) -> ResolventStudy:
    """
    Relative distance ||u_alpha - u_0|| / ||u_0|| of mode resolvents as alpha -> 0.

    Args:
        alphas: Fluxes in (0, 1), typically decreasing
        k: Angular channel
        s_profile: Azimuthal profile s(r)
        z: Spectral parameter off [0, inf)
        f: Source profile, evaluated at the grid nodes
        grid: Radial grid shared by every alpha

    Returns:
        ResolventStudy with one row per alpha
    """
    grid = RadialGrid() if grid is None else grid
    source = f(grid.nodes)
    reference = resolvent_apply(assemble_mode_operator(k, 0.0, s_profile, grid), z, source)
    reference_norm = grid.norm(reference)
    rows = []
    for alpha in alphas:
        if not 0.0 < alpha < 1.0:
            raise ValidationError(f"alpha must lie in (0,1), got {alpha}", key="alpha")
        u = resolvent_apply(assemble_mode_operator(k, alpha, s_profile, grid), z, source)
        error = grid.norm(u - reference) / reference_norm
        logger.info("resolvent sweep alpha=%g k=%d: %.6g", alpha, k, error)
        rows.append(ResolventRow(float(alpha), int(k), grid.n, error))
    return ResolventStudy(rows, reference_norm)
