"""
The coupling matrix Xi_{kk'}(lambda) of the charge block.

Three contributions, with S~ = S - S(0) and u_k = chi G^(k)_lambda:

  <u_k | (|S~|^2 + 2 S~ . A_alpha) u_k'>
  + ||(grad chi) G^(k)||^2 delta_kk'
  + 2 <u_k | S~ . (-i grad) u_k'>

The error estimate compares the base grid with a higher Gauss order on the
same panels.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.fields.potentials import PerturbationField
from src.fields.profiles import Cutoff
from src.forms.polar_functions import CutoffFunction, GreenComponent
from src.greens.green_function import CHANNELS, GreenFunction
from src.utils.constants import DEFAULT_TOLERANCES, Tolerances
from src.utils.errors import QuadratureBudgetError, ValidationError
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class XiMatrix:
    """Xi(lambda) with its quadrature error estimate and the gradient sub-term."""

    values: np.ndarray
    gradient_term: np.ndarray
    error: float
    lam: float
    alpha: float
    cutoff: Cutoff
    field_name: str

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.values - self.values.conj().T)))

    def entry(self, k: int, k_prime: int) -> complex:
        return complex(self.values[CHANNELS.index(k), CHANNELS.index(k_prime)])


def _xi_terms(alpha: float, field: PerturbationField, cutoff: Cutoff, lam: float,
              grid: PolarGrid):
    R, T = grid.R, grid.T
    chi = CutoffFunction(cutoff)
    u = [(chi * GreenComponent(GreenFunction(k, alpha, lam))).sample(R, T) for k in CHANNELS]
    _, d_chi, _ = cutoff.evaluate(grid.r)
    s_r, s_t = field.polar(R, T, shifted=True)
    potential = s_r ** 2 + s_t ** 2 + 2.0 * s_t * alpha / R

    values = np.zeros((2, 2), dtype=complex)
    gradient = np.zeros((2, 2), dtype=complex)
    for i, u_k in enumerate(u):
        conj_k = np.conj(u_k.value)
        profile = GreenFunction(CHANNELS[i], alpha, lam).radial(grid.r)
        # |grad chi|^2 |G|^2 is radial
        diagonal = grid.integrate(((d_chi * profile) ** 2)[:, None])
        for j, u_kp in enumerate(u):
            quadratic = grid.integrate(conj_k * potential * u_kp.value)
            cross = 2.0 * grid.integrate(
                conj_k * (s_r * (-1j * u_kp.d_r) + s_t * (-1j * u_kp.d_t)))
            gradient[i, j] = cross
            values[i, j] = quadratic + cross + (diagonal if i == j else 0.0)
    return values, gradient


def xi_matrix(alpha: float, field: PerturbationField, cutoff: Cutoff, lam: float,
              grid: Optional[PolarGrid] = None,
              tolerances: Tolerances = DEFAULT_TOLERANCES) -> XiMatrix:
    """
    Assemble Xi(lambda) by polar quadrature.

    Args:
        alpha: Reduced flux in (0, 1)
        field: Regular perturbation, Lipschitz at the origin
        cutoff: Cutoff chi
        lam: Spectral parameter
        grid: Base grid; the cutoff radii are added as panel breaks
        tolerances: Supplies the error budget

    Returns:
        The XiMatrix

    Raises:
        QuadratureBudgetError: If base and refined grids disagree beyond budget
    """
    if not lam > 0.0:
        raise ValidationError(f"lambda must be positive, got {lam}", key="lambda")
    grid = (PolarGrid() if grid is None else grid).with_breakpoints(cutoff.a, cutoff.b)
    values, gradient = _xi_terms(alpha, field, cutoff, lam, grid)
    refined_values, refined_gradient = _xi_terms(alpha, field, cutoff, lam, grid.refined())
    scale = float(np.max(np.abs(refined_values)))
    error = (float(np.max(np.abs(refined_values - values)))
             + tolerances.quadrature_floor * (1.0 + scale))
    logger.debug("xi(alpha=%g, lambda=%g): error estimate %.3g", alpha, lam, error)
    if error > tolerances.xi_budget * (1.0 + scale):
        raise QuadratureBudgetError(
            f"xi quadrature error {error:.3g} exceeds budget", key="xi_matrix")
    return XiMatrix(refined_values, refined_gradient, error, lam, alpha, cutoff, field.name)
