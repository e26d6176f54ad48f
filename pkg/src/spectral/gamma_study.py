"""
Recovery sequence eta_alpha psi0 for the limit alpha -> 0 of Friedrichs forms.

For every flux alpha the study evaluates Q_alpha[eta_alpha psi0], its gap to
Q_0[psi0], the singular term ||A_alpha eta_alpha psi0||^2 against its explicit
bound, the H^1 distance to psi0, and the four terms of the telescopic identity

    Q_alpha[psi_a] - Q_0[psi0] = ||A chi_a||^2 + 2 Re <D chi_a | A chi_a>
                               + ||D chi_a||^2 - ||D chi_0||^2

with D = -i grad + S - S(0) and chi = e^{i S(0).x} psi.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.fields.potentials import PerturbationField, zero_field
from src.fields.profiles import RecoveryProfile
from src.forms.friedrichs import covariant_gradient, friedrichs_form, l2_norm_squared
from src.forms.polar_functions import EtaFunction, GaugePhase, PolarFunction, RadialMode
from src.utils.errors import DivergentIntegralError, ValidationError
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)


def _gaussian_profile(r):
    value = np.exp(-r * r / 2.0)
    return value, -r * value


def _damped_profile(r):
    value = r * np.exp(-r * r)
    return value, (1.0 - 2.0 * r * r) * np.exp(-r * r)


def gaussian_state() -> PolarFunction:
    """psi0 = e^{-r^2/2}, with ||psi0||^2 = pi and ||grad psi0||^2 = pi."""
    return RadialMode(_gaussian_profile, 0, 0.0)


def damped_state() -> PolarFunction:
    """psi0 = r e^{-r^2}."""
    return RadialMode(_damped_profile, 0, 1.0)


def singular_term_norm(psi: PolarFunction, alpha: float,
                       grid: Optional[PolarGrid] = None) -> float:
    """||A_alpha psi||^2 = int alpha^2 |psi|^2 / r^2; +inf when psi does not vanish at 0."""
    grid = PolarGrid() if grid is None else grid
    sample = psi.sample(grid.R, grid.T)
    return grid.integrate(alpha ** 2 * np.abs(sample.value) ** 2 / grid.R ** 2)


def _weight(R: np.ndarray) -> np.ndarray:
    return 1.0 / (R ** 2 * (1.0 + np.abs(np.log(R))) ** 2)


def sobolev_weight_norm(psi0: PolarFunction, grid: Optional[PolarGrid] = None,
                        radius: float = 1.0) -> float:
    """
    int_{|x| < radius} |psi0|^2 / (|x|^2 (1 + |log |x||)^2) dx.

    The disk inside the innermost panel is closed analytically with
    |psi0|^2 frozen at its innermost angular mean, where the weight
    integrates to 2 pi / (1 + |log r|).

    Raises:
        DivergentIntegralError: If the quadrature is not finite
    """
    if not radius > 0.0:
        raise ValidationError(f"radius must be positive, got {radius}", key="radius")
    grid = PolarGrid() if grid is None else grid
    if radius < grid.r_max:
        grid = grid.with_breakpoints(radius)
    R = grid.R
    modulus = np.abs(psi0.sample(R, grid.T).value) ** 2
    body = grid.integrate(np.where(grid.mask(hi=radius), modulus * _weight(R), 0.0), tail=False)
    r0 = grid.breaks[0]
    tail = 2.0 * math.pi * float(np.mean(modulus[0])) / (1.0 + abs(math.log(r0)))
    value = body + tail
    if not math.isfinite(value):
        raise DivergentIntegralError("weighted Sobolev integral diverges", key="psi0")
    return float(value)


def singular_bound(psi0: PolarFunction, alpha: float, grid: Optional[PolarGrid] = None,
                   norm_squared: Optional[float] = None) -> float:
    """
    Explicit bound on ||A_alpha eta_alpha psi0||^2.

    Outside the disk of radius sqrt(alpha) the term is at most alpha ||psi0||^2.
    Inside, sup alpha^2 eta^2 (1 + |log r|)^2 <= e^{-2 - alpha log alpha + 2 alpha},
    which multiplies the weighted Sobolev integral over the disk.
    """
    if norm_squared is None:
        norm_squared = l2_norm_squared(psi0, grid)
    inner = math.exp(-2.0 - alpha * math.log(alpha) + 2.0 * alpha)
    return alpha * norm_squared + inner * sobolev_weight_norm(psi0, grid, math.sqrt(alpha))


@dataclass(frozen=True)
class GammaRow:
    """One flux of the recovery study."""

    alpha: float
    q_alpha: float
    gap: float
    singular_norm: float
    singular_bound: float
    h1_gap: float
    singular_term: float
    mixed_term: float
    gradient_term: float
    reference_term: float
    telescopic_residual: float
    quadrature_error: float
    lower_bound_ok: bool

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GammaStudy:
    """Recovery rows plus the limit data."""

    q0: float
    norm_squared: float
    rows: List[GammaRow]

    @property
    def gaps(self) -> np.ndarray:
        return np.array([row.gap for row in self.rows])

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.gaps) < 0.0))

    @property
    def reduction(self) -> float:
        gaps = self.gaps
        return float(gaps[-1] / gaps[0])


def _h1_distance(psi_a: PolarFunction, psi0: PolarFunction, grid: PolarGrid) -> float:
    diff = psi_a.sample(grid.R, grid.T) - psi0.sample(grid.R, grid.T)
    density = np.abs(diff.value) ** 2 + np.abs(diff.d_r) ** 2 + np.abs(diff.d_t) ** 2
    return math.sqrt(grid.integrate(density))


def _telescopic_terms(psi_a: PolarFunction, psi0: PolarFunction, alpha: float,
                      field: PerturbationField, grid: PolarGrid):
    s0x, s0y = field.s_at_origin
    phase = GaugePhase((-s0x, -s0y))
    R, T = grid.R, grid.T
    s_r, s_t = field.polar(R, T, shifted=True)
    chi_a = (phase * psi_a).sample(R, T)
    chi_0 = (phase * psi0).sample(R, T)
    d_r, d_t = covariant_gradient(chi_a, R, 0.0, s_r, s_t)
    d0_r, d0_t = covariant_gradient(chi_0, R, 0.0, s_r, s_t)
    a_t = alpha / R * chi_a.value
    singular = grid.integrate(np.abs(a_t) ** 2)
    mixed = 2.0 * complex(grid.integrate(np.conj(d_t) * a_t)).real
    gradient = grid.integrate(np.abs(d_r) ** 2 + np.abs(d_t) ** 2)
    reference = -grid.integrate(np.abs(d0_r) ** 2 + np.abs(d0_t) ** 2)
    return singular, mixed, gradient, reference


def gamma_recovery_study(psi0: PolarFunction, alphas: Sequence[float],
                         field: Optional[PerturbationField] = None,
                         grid: Optional[PolarGrid] = None) -> GammaStudy:
    """
    Recovery-sequence table for the alpha -> 0 limit of the Friedrichs forms.

    Args:
        psi0: Smooth H^1 function with Gaussian-type decay
        alphas: Decreasing fluxes in (0, 1)
        field: Uniformly bounded perturbation (default S = 0)
        grid: Base polar grid; sqrt(alpha) and 2 sqrt(alpha) are added as breaks

    Returns:
        GammaStudy with one GammaRow per alpha

    Raises:
        ValidationError: If the field is not uniformly bounded
        DivergentIntegralError: If psi0 fails the H^1 quadrature
    """
    field = zero_field() if field is None else field
    if not field.uniformly_bounded:
        raise ValidationError(f"field '{field.name}' is not uniformly bounded", key="field")
    grid = PolarGrid() if grid is None else grid

    norm_squared = l2_norm_squared(psi0, grid)
    gradient = friedrichs_form(psi0, 0.0, zero_field(), grid)
    if not (math.isfinite(norm_squared) and math.isfinite(gradient)):
        raise DivergentIntegralError("psi0 is not in H^1", key="psi0")
    q0 = friedrichs_form(psi0, 0.0, field, grid)
    logger.info("recovery study: Q_0[psi0] = %.12g, ||psi0||^2 = %.12g", q0, norm_squared)

    rows = []
    for alpha in alphas:
        profile = RecoveryProfile(float(alpha))
        local = grid.with_breakpoints(profile.inner_radius, profile.outer_radius)
        psi_a = EtaFunction(profile) * psi0
        q_alpha = friedrichs_form(psi_a, alpha, field, local)
        error = abs(friedrichs_form(psi_a, alpha, field, local.refined()) - q_alpha)
        terms = _telescopic_terms(psi_a, psi0, alpha, field, local)
        residual = abs(sum(terms) - (q_alpha - q0))
        row = GammaRow(
            alpha=float(alpha),
            q_alpha=q_alpha,
            gap=abs(q_alpha - q0),
            singular_norm=singular_term_norm(psi_a, alpha, local),
            singular_bound=singular_bound(psi0, alpha, grid, norm_squared),
            h1_gap=_h1_distance(psi_a, psi0, local),
            singular_term=terms[0],
            mixed_term=terms[1],
            gradient_term=terms[2],
            reference_term=terms[3],
            telescopic_residual=residual,
            quadrature_error=error,
            lower_bound_ok=q_alpha >= q0 - error - 1e-10 * abs(q0),
        )
        logger.info("alpha=%g: gap %.6g, singular %.6g (bound %.6g)",
                    alpha, row.gap, row.singular_norm, row.singular_bound)
        rows.append(row)
    return GammaStudy(q0, norm_squared, rows)
