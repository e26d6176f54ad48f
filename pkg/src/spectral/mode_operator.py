"""
Angular-mode reduction of the Friedrichs Hamiltonian for azimuthal S = s(r) theta_hat.

On e^{ik theta} f(r) the operator acts as -f'' - f'/r + v f with
v = (k + alpha + r s)^2 / r^2. Writing f = r^nu g, nu = |k + alpha|, gives

    -(r^{2nu+1} g')' / r^{2nu+1} + w g,    w = 2 (k + alpha) s / r + s^2,

self-adjoint in L^2(r^{2nu+1} dr). A finite-volume scheme on the graded
grid with zero flux through the origin and g = 0 at r_max yields a
symmetric tridiagonal matrix after scaling by the square root of the cell
weights. The scheme keeps exactly the r^{+nu} (Friedrichs) behaviour.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh_tridiagonal
from scipy.special import jn_zeros

from src.spectral.radial_grid import RadialGrid, graded_points
from src.utils.constants import DEFAULT_TOLERANCES, Tolerances
from src.utils.errors import CoarseGridWarning, ValidationError

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]


def _zero_profile(r):
    return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class ModeOperator:
    """
    Discrete mode operator.

    Attributes:
        k: Angular channel
        alpha: Flux in [0, 1)
        grid: Radial grid
        weights: Cell weights int r^{2nu+1} dr
        stiffness_diagonal: Diagonal of the (unscaled) stiffness matrix
        fluxes: Face transmissibilities between consecutive cells
        residual_potential: w at the nodes
        diagonal: Diagonal of the symmetric matrix
        off_diagonal: Off-diagonal of the symmetric matrix
    """

    k: int
    alpha: float
    grid: RadialGrid
    weights: np.ndarray = field(repr=False)
    stiffness_diagonal: np.ndarray = field(repr=False)
    fluxes: np.ndarray = field(repr=False)
    residual_potential: np.ndarray = field(repr=False)
    diagonal: np.ndarray = field(repr=False)
    off_diagonal: np.ndarray = field(repr=False)
    s_profile: Profile = field(default=_zero_profile, repr=False, compare=False)

    @property
    def nu(self) -> float:
        return abs(self.k + self.alpha)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def potential(self, r) -> np.ndarray:
        """Full potential v(r) = (k + alpha + r s(r))^2 / r^2."""
        r = np.asarray(r, dtype=float)
        return (self.k + self.alpha + r * self.s_profile(r)) ** 2 / r ** 2

    def dense(self) -> np.ndarray:
        """Symmetric matrix as a dense array (tests and small grids only)."""
        return (np.diag(self.diagonal) + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))

    def apply(self, g: np.ndarray) -> np.ndarray:
        """Stiffness matrix times g (before the weight scaling)."""
        out = self.stiffness_diagonal * g
        out[:-1] -= self.fluxes * g[1:]
        out[1:] -= self.fluxes * g[:-1]
        return out


def _assemble_arrays(k: int, alpha: float, s_profile: Profile, faces: np.ndarray,
                     nodes: np.ndarray, r_max: float):
    nu = abs(k + alpha)
    power = 2.0 * nu + 2.0
    weights = (faces[1:] ** power - faces[:-1] ** power) / power
    flux_faces = faces[1:] ** (2.0 * nu + 1.0)
    interior = flux_faces[:-1] / np.diff(nodes)
    boundary = flux_faces[-1] / (r_max - nodes[-1])
    s = np.asarray(s_profile(nodes), dtype=float)
    residual = 2.0 * (k + alpha) * s / nodes + s * s
    stiffness = residual * weights
    stiffness[:-1] += interior
    stiffness[1:] += interior
    stiffness[-1] += boundary
    diagonal = stiffness / weights
    off_diagonal = -interior / np.sqrt(weights[:-1] * weights[1:])
    return weights, stiffness, interior, residual, diagonal, off_diagonal


def _lowest(diagonal: np.ndarray, off_diagonal: np.ndarray, count: int) -> np.ndarray:
    return eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True, select="i",
                            select_range=(0, count - 1), lapack_driver="stebz")


def assemble_mode_operator(k: int, alpha: float, s_profile: Optional[Profile] = None,
                           grid: Optional[RadialGrid] = None, probe: bool = True,
                           tolerances: Tolerances = DEFAULT_TOLERANCES) -> ModeOperator:
    """
    Build the symmetric tridiagonal representation of one angular mode.

    Args:
        k: Angular channel
        alpha: Flux in [0, 1); alpha = 0 gives the free magnetic operator
        s_profile: Azimuthal profile s(r), Lipschitz at 0 (default s = 0)
        grid: Radial grid (default RadialGrid())
        probe: Compare the lowest eigenvalue with a half-resolution grid
        tolerances: Supplies the coarse-grid threshold

    Returns:
        The ModeOperator

    Warns:
        CoarseGridWarning: If the half-resolution probe disagrees too much
    """
    if not 0.0 <= alpha < 1.0:
        raise ValidationError(f"alpha must lie in [0,1), got {alpha}", key="alpha")
    s_profile = _zero_profile if s_profile is None else s_profile
    grid = RadialGrid() if grid is None else grid
    arrays = _assemble_arrays(k, alpha, s_profile, grid.faces, grid.nodes, grid.r_max)
    op = ModeOperator(int(k), float(alpha), grid, *arrays, s_profile=s_profile)

    if probe:
        faces, nodes = graded_points(grid.r_max, grid.n // 2, grid.grading)
        coarse = _assemble_arrays(k, alpha, s_profile, faces, nodes, grid.r_max)
        fine_value = _lowest(op.diagonal, op.off_diagonal, 1)[0]
        coarse_value = _lowest(coarse[4], coarse[5], 1)[0]
        drift = abs(fine_value - coarse_value) / max(abs(fine_value), 1.0)
        logger.debug("mode k=%d alpha=%g: probe drift %.3g", k, alpha, drift)
        if drift > tolerances.coarse_grid:
            warnings.warn(f"grid too coarse for mode k={k}, alpha={alpha}: "
                          f"half-resolution drift {drift:.3g}", CoarseGridWarning)
    return op


def eigenvalues(op: ModeOperator, count: int) -> np.ndarray:
    """Lowest ``count`` eigenvalues by Sturm-sequence bisection."""
    if not 1 <= count <= 10:
        raise ValidationError(f"count must lie in [1, 10], got {count}", key="count")
    return _lowest(op.diagonal, op.off_diagonal, count)


def eigenpairs(op: ModeOperator, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lowest eigenvalues with their eigenfunctions f = r^nu g at the nodes.

    Eigenfunctions are normalized in the discrete L^2(r dr) inner product
    sum |g|^2 W and oriented so that g is positive at the first node.
    """
    if not 1 <= count <= 10:
        raise ValidationError(f"count must lie in [1, 10], got {count}", key="count")
    values, vectors = eigh_tridiagonal(op.diagonal, op.off_diagonal, select="i",
                                       select_range=(0, count - 1))
    g = vectors / np.sqrt(op.weights)[:, None]
    g *= np.sign(g[0])[None, :]
    return values, op.nodes[:, None] ** op.nu * g


class ExtrapolatedSpectrum(NamedTuple):
    values: np.ndarray
    errors: np.ndarray
    orders: np.ndarray
    raw: np.ndarray


def extrapolated_eigenvalues(k: int, alpha: float, s_profile: Optional[Profile] = None,
                             grid: Optional[RadialGrid] = None,
                             count: int = 3) -> ExtrapolatedSpectrum:
    """
    Richardson-extrapolated eigenvalues from grids with n, 2n and 4n cells.

    Returns:
        Extrapolated values (4 E_4n - E_2n) / 3, error estimates (difference of
        the two extrapolants), fitted convergence orders and the raw (3, count) table
    """
    grid = RadialGrid() if grid is None else grid
    raw = np.array([eigenvalues(assemble_mode_operator(k, alpha, s_profile, grid.refined(f),
                                                       probe=False), count)
                    for f in (1, 2, 4)])
    coarse, middle, fine = raw
    first = (4.0 * middle - coarse) / 3.0
    second = (4.0 * fine - middle) / 3.0
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log2(np.abs(coarse - middle) / np.abs(middle - fine))
    logger.debug("mode k=%d alpha=%g orders %s", k, alpha, orders)
    return ExtrapolatedSpectrum(second, np.abs(second - first), orders, raw)


def mode_profile(op: ModeOperator, index: int = 0) -> Callable:
    """
    Eigenfunction ``index`` as a callable r -> (f(r), f'(r)).

    g = f / r^nu is interpolated by a cubic spline through the nodes; f is
    L^2(r dr) normalized.
    """
    _, vectors = eigenpairs(op, index + 1)
    nu = op.nu
    nodes = op.nodes
    g = vectors[:, index] / nodes ** nu
    spline = CubicSpline(nodes, g)
    slope = spline.derivative()

    def profile(r):
        r = np.asarray(r, dtype=float)
        g_r, dg_r = spline(r), slope(r)
        f = r ** nu * g_r
        df = r ** nu * dg_r + (nu * r ** (nu - 1.0) * g_r if nu > 0.0 else 0.0)
        return f, df

    return profile


def oscillator_levels(k: int, alpha: float, B: float, count: int) -> List[float]:
    """Exact levels B (2n + nu + (k + alpha) + 1) of the homogeneous-field reduction."""
    nu = abs(k + alpha)
    return [B * (2 * n + nu + (k + alpha) + 1.0) for n in range(count)]


def dirichlet_disk_level(r_max: float) -> float:
    """(j_{0,1} / r_max)^2, the lowest Dirichlet level of the free s-wave."""
    return float((jn_zeros(0, 1)[0] / r_max) ** 2)
