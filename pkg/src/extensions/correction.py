"""Action of the singular extension: the bracketed correction to H_{alpha,S} phi_lambda."""

import logging
from typing import Optional, Tuple

import numpy as np

from src.forms.polar_functions import GreenComponent
from src.forms.qbeta import form_grid
from src.forms.trial_function import TrialFunction
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)


def hbeta_apply_correction(psi: TrialFunction, grid: Optional[PolarGrid] = None
                           ) -> Tuple[np.ndarray, PolarGrid]:
    """
    Correction term of H^(beta) psi on a polar grid.

    sum_k q^(k) E [2 (S~ chi - i grad chi) . (-i grad + A_alpha) G_k
                   + (|S~|^2 chi + 2 S~ . (-i grad chi) - lap chi) G_k]

    with E = e^{-i S(0).x} and S~ = S - S(0). The correction vanishes
    inside the plateau of chi when S = 0, and outside its support always.

    Args:
        psi: Trial function supplying charges, cutoff, field and lambda
        grid: Base grid; the cutoff radii are added as panel breaks

    Returns:
        (values of shape grid.shape, the grid used)
    """
    grid = form_grid(psi, grid)
    R, T = grid.R, grid.T
    cutoff = psi.cutoff
    chi, d_chi, _ = cutoff.evaluate(grid.r)
    chi, d_chi = chi[:, None], d_chi[:, None]
    lap_chi = cutoff.laplacian(grid.r)[:, None]
    s_r, s_t = psi.field.polar(R, T, shifted=True)
    gauge = psi.gauge.sample(R, T).value

    values = np.zeros(grid.shape, dtype=complex)
    for g, q in zip(psi.greens, psi.charges):
        q = complex(q)
        if q == 0.0:
            continue
        green = GreenComponent(g).sample(R, T)
        # (-i grad + A_alpha) G in polar components
        cov_r = -1j * green.d_r
        cov_t = -1j * green.d_t + (psi.alpha / R) * green.value
        transport = 2.0 * ((s_r * chi - 1j * d_chi) * cov_r + s_t * chi * cov_t)
        potential = ((s_r ** 2 + s_t ** 2) * chi - 2j * s_r * d_chi - lap_chi) * green.value
        values += q * gauge * (transport + potential)
    logger.debug("correction evaluated on %d x %d nodes", *grid.shape)
    return values, grid
