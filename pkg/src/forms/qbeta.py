"""
Quadratic forms Q^(beta) of the singular perturbations and their invariances.

For psi = phi_lambda + E chi sum_k q^(k) G^(k)_lambda with E = e^{-i S(0).x}
and S~ = S - S(0):

    Q[psi] = Q^(F)[phi] - lambda^2 ||psi||^2 + lambda^2 ||phi||^2
           + 2 Re sum_k q^(k) ( 2 <(-i grad + A) phi | E (S~ chi - i grad chi) G_k>
                               + <phi | E [|S~|^2 chi + 2 S(0).(S~ chi - i grad chi)
                                           + lap chi] G_k> )
           + q^* (beta + pi^2 lambda^{2 nu_k} / sin(pi alpha) delta + Xi) q

Cross terms are integrated over the support of chi only.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.fields.profiles import Cutoff
from src.forms.friedrichs import covariant_gradient, friedrichs_form
from src.forms.polar_functions import CancellingSum, GreenComponent, ScaledFunction
from src.forms.trial_function import HermitianCoupling, TrialFunction, minimal_rate
from src.forms.xi_matrix import XiMatrix, xi_matrix
from src.greens.green_function import CHANNELS
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)


def form_grid(psi: TrialFunction, grid: Optional[PolarGrid] = None) -> PolarGrid:
    """Quadrature grid for psi: the base grid with the cutoff radii as panel breaks."""
    return (PolarGrid() if grid is None else grid).with_breakpoints(psi.cutoff.a, psi.cutoff.b)


def charge_diagonal(alpha: float, lam: float) -> np.ndarray:
    """pi^2 lambda^{2 nu_k} / sin(pi alpha) for k = 0, -1."""
    return np.array([math.pi ** 2 * lam ** (2.0 * abs(k + alpha)) / math.sin(math.pi * alpha)
                     for k in CHANNELS])


@dataclass(frozen=True)
class QBetaBreakdown:
    """Every line of Q^(beta)[psi] separately."""

    friedrichs: float
    mass_shift: float
    cross_gradient: complex
    cross_potential: complex
    charge_block: complex
    norm_squared: float
    xi: Optional[XiMatrix] = field(default=None, repr=False)

    @property
    def cross_terms(self) -> float:
        return 2.0 * (self.cross_gradient + self.cross_potential).real

    @property
    def charge_block_imag(self) -> float:
        return self.charge_block.imag

    @property
    def total(self) -> float:
        return self.friedrichs + self.mass_shift + self.cross_terms + self.charge_block.real

    def as_dict(self) -> dict:
        return {
            "friedrichs": self.friedrichs,
            "mass_shift": self.mass_shift,
            "cross_terms": self.cross_terms,
            "charge_block": self.charge_block.real,
            "charge_block_imag": self.charge_block.imag,
            "total": self.total,
        }


def _cross_terms(psi: TrialFunction, grid: PolarGrid) -> Tuple[complex, complex]:
    R, T = grid.R, grid.T
    alpha, cutoff = psi.alpha, psi.cutoff
    support = grid.mask(0.0, cutoff.b)
    phi = psi.phi.sample(R, T)
    d_r, d_t = covariant_gradient(phi, R, alpha)
    gauge = psi.gauge.sample(R, T).value
    chi, d_chi, _ = cutoff.evaluate(grid.r)
    chi, d_chi = chi[:, None], d_chi[:, None]
    lap_chi = cutoff.laplacian(grid.r)[:, None]
    s_r, s_t = psi.field.polar(R, T, shifted=True)
    s0x, s0y = psi.field.s_at_origin
    s0_r = s0x * np.cos(T) + s0y * np.sin(T)
    s0_t = -s0x * np.sin(T) + s0y * np.cos(T)

    vector_r = s_r * chi - 1j * d_chi
    vector_t = s_t * chi
    scalar = ((s_r ** 2 + s_t ** 2) * chi
              + 2.0 * (s0_r * vector_r + s0_t * vector_t) + lap_chi)

    gradient_total = 0.0 + 0.0j
    potential_total = 0.0 + 0.0j
    for g, q in zip(psi.greens, psi.charges):
        q = complex(q)
        if q == 0.0:
            continue
        green = GreenComponent(g).sample(R, T).value * gauge
        gradient_part = 2.0 * grid.integrate(
            support * (np.conj(d_r) * vector_r + np.conj(d_t) * vector_t) * green)
        potential_part = grid.integrate(support * np.conj(phi.value) * scalar * green)
        gradient_total += q * gradient_part
        potential_total += q * potential_part
    return gradient_total, potential_total


def qbeta_breakdown(psi: TrialFunction, beta: HermitianCoupling,
                    grid: Optional[PolarGrid] = None) -> QBetaBreakdown:
    """
    Evaluate every term of Q^(beta)[psi].

    Args:
        psi: Trial function
        beta: Extension parameter
        grid: Base quadrature grid

    Returns:
        The QBetaBreakdown

    Raises:
        InsufficientDecayError: Propagated from the Friedrichs part
    """
    grid = form_grid(psi, grid)
    friedrichs = friedrichs_form(psi.phi, psi.alpha, psi.field, grid)
    if not psi.has_charges:
        norm = grid.integrate(psi.phi.sample(grid.R, grid.T).squared_modulus())
        return QBetaBreakdown(friedrichs, 0.0, 0j, 0j, 0j, norm)

    lam2 = psi.lam ** 2
    psi_norm = grid.integrate(psi.total().sample(grid.R, grid.T).squared_modulus())
    phi_norm = grid.integrate(psi.phi.sample(grid.R, grid.T).squared_modulus())
    cross_gradient, cross_potential = _cross_terms(psi, grid)

    xi = xi_matrix(psi.alpha, psi.field, psi.cutoff, psi.lam, grid)
    block = beta.matrix() + np.diag(charge_diagonal(psi.alpha, psi.lam)) + xi.values
    q = np.asarray(psi.charges, dtype=complex)
    charge_block = complex(q.conj() @ block @ q)

    breakdown = QBetaBreakdown(friedrichs, lam2 * (phi_norm - psi_norm), cross_gradient,
                               cross_potential, charge_block, psi_norm, xi)
    logger.debug("qbeta terms: %s", breakdown.as_dict())
    return breakdown


def qbeta_eval(psi: TrialFunction, beta: HermitianCoupling,
               grid: Optional[PolarGrid] = None) -> float:
    """Q^(beta)[psi], a real number."""
    return qbeta_breakdown(psi, beta, grid).total


def change_lambda(psi: TrialFunction, lambda2: float) -> TrialFunction:
    """
    Re-express psi with respect to lambda2.

    phi_{lambda2} = phi_{lambda1} + E chi sum_k q^(k) (G^(k)_{lambda1} - G^(k)_{lambda2});
    charges and the represented function are unchanged.
    """
    if lambda2 == psi.lam or not psi.has_charges:
        return psi.with_representation(psi.phi, lambda2)
    rate = min(psi.phi.vanishing_rate, minimal_rate(psi.alpha))
    phi2 = CancellingSum((psi.phi, psi.singular_part(),
                          ScaledFunction(-1.0, psi.singular_part(lam=lambda2))), rate)
    return psi.with_representation(phi2, lambda2)


def change_cutoff(psi: TrialFunction, cutoff2: Cutoff) -> TrialFunction:
    """Re-express psi with another cutoff; phi absorbs E (chi1 - chi2) sum_k q^(k) G^(k)."""
    if cutoff2 == psi.cutoff or not psi.has_charges:
        return psi.with_representation(psi.phi, psi.lam, cutoff2)
    phi2 = CancellingSum((psi.phi, psi.singular_part(),
                          ScaledFunction(-1.0, psi.singular_part(cutoff=cutoff2))),
                         psi.phi.vanishing_rate)
    return psi.with_representation(phi2, psi.lam, cutoff2)


def coercivity_probe(psi: TrialFunction, beta: HermitianCoupling, lam: float,
                     grid: Optional[PolarGrid] = None) -> float:
    """Q^(beta)[psi] + lambda^2 ||psi||^2."""
    breakdown = qbeta_breakdown(psi, beta, grid)
    return breakdown.total + lam ** 2 * breakdown.norm_squared


@dataclass
class CoercivityReport:
    rows: List[Tuple[int, float, float]]
    lambda_star: float

    @property
    def minimum(self) -> float:
        return min(value for _, _, value in self.rows)


def coercivity_sweep(trials: Sequence[TrialFunction], beta: HermitianCoupling,
                     lambdas: Sequence[float],
                     grid: Optional[PolarGrid] = None) -> CoercivityReport:
    """
    Evaluate the coercivity probe over trial functions and shifts.

    lambda_star is the smallest swept lambda from which every probe value
    (at that lambda and all larger ones) is non-negative; +inf if none.
    """
    lambdas = sorted(float(lam) for lam in lambdas)
    rows = []
    for index, psi in enumerate(trials):
        breakdown = qbeta_breakdown(psi, beta, grid)
        for lam in lambdas:
            rows.append((index, lam, breakdown.total + lam ** 2 * breakdown.norm_squared))

    lambda_star = math.inf
    for lam in reversed(lambdas):
        if all(value >= 0.0 for _, l_row, value in rows if l_row == lam):
            lambda_star = lam
        else:
            break
    logger.info("coercivity sweep: %d trials, lambda* = %g", len(trials), lambda_star)
    return CoercivityReport(rows, lambda_star)
