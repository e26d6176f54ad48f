"""
The 2x2 extension matrix M(lambda) = beta + pi^2 lambda^{2 nu_k} / sin(pi alpha) delta_kk'.

For S = 0, zeros of det M(lambda) are bound states at energy -lambda^2.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from src.forms.qbeta import charge_diagonal
from src.forms.trial_function import HermitianCoupling
from src.greens.green_function import CHANNELS
from src.specfun import gamma_fn
from src.utils.constants import DEFAULT_TOLERANCES, ROOT_SAMPLES, Tolerances
from src.utils.errors import (
    BracketWarning,
    ConditioningWarning,
    SingularExtensionError,
    ValidationError,
)

logger = logging.getLogger(__name__)


def _validate(alpha: float, lam: float):
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0,1), got {alpha}", key="alpha")
    if not lam > 0.0:
        raise ValidationError(f"lambda must be positive, got {lam}", key="lambda")


@dataclass(frozen=True)
class ExtensionMatrix:
    """M(lambda) together with the parameters it was assembled from."""

    values: np.ndarray
    beta: HermitianCoupling
    alpha: float
    lam: float

    @property
    def determinant(self) -> float:
        det = complex(np.linalg.det(self.values))
        scale = float(np.max(np.abs(self.values))) ** 2
        if abs(det.imag) > 1e-14 * max(scale, 1.0):
            logger.warning("determinant has imaginary part %.3g", det.imag)
        return det.real

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.values))

    def null_vector(self) -> np.ndarray:
        """Right singular vector of the smallest singular value, unit norm."""
        _, _, vh = np.linalg.svd(self.values)
        return vh[-1].conj()


def extension_matrix(beta: HermitianCoupling, alpha: float, lam: float) -> ExtensionMatrix:
    """
    Assemble M(lambda).

    Args:
        beta: Hermitian extension parameter
        alpha: Reduced flux in (0, 1)
        lam: lambda > 0

    Returns:
        The ExtensionMatrix
    """
    _validate(alpha, lam)
    values = beta.matrix() + np.diag(charge_diagonal(alpha, lam)).astype(complex)
    return ExtensionMatrix(values, beta, alpha, lam)


def extension_determinant(beta: HermitianCoupling, alpha: float, lam: float) -> float:
    return extension_matrix(beta, alpha, lam).determinant


def condition_number(beta: HermitianCoupling, alpha: float, lam: float) -> float:
    return extension_matrix(beta, alpha, lam).condition


class BoundState(NamedTuple):
    lam: float
    energy: float
    null_vector: np.ndarray


def bound_states(beta: HermitianCoupling, alpha: float, bracket: Tuple[float, float],
                 samples: int = ROOT_SAMPLES,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> List[BoundState]:
    """
    Bound states of the S = 0 extension labelled by beta.

    det M(lambda) is sampled at log-uniform points of the bracket and every
    sign change is refined with Brent's method.

    Args:
        beta: Hermitian extension parameter
        alpha: Reduced flux in (0, 1)
        bracket: (lambda_min, lambda_max), both positive
        samples: Number of determinant samples
        tolerances: Supplies the root tolerance

    Returns:
        Bound states sorted by lambda (deepest last)
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi:
        raise ValidationError(f"need 0 < lambda_min < lambda_max, got {bracket}", key="bracket")
    _validate(alpha, lo)

    def det(lam: float) -> float:
        return extension_determinant(beta, alpha, lam)

    grid = np.geomspace(lo, hi, samples)
    values = np.array([det(lam) for lam in grid])
    roots = []
    for i in range(samples - 1):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            roots.append(brentq(det, grid[i], grid[i + 1], xtol=tolerances.root_xtol))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))

    if not roots:
        det_beta = float(np.linalg.det(beta.matrix()).real)
        if (values[0] < 0.0 and values[-1] < 0.0) or det_beta * values[0] < 0.0:
            warnings.warn(f"bracket {bracket} may miss roots of det M", BracketWarning)

    states = []
    for lam in roots:
        vector = extension_matrix(beta, alpha, lam).null_vector()
        states.append(BoundState(lam, -lam * lam, vector))
        logger.debug("bound state lambda*=%.15g", lam)
    return states


def charge_solve(beta: HermitianCoupling, alpha: float, lam: float,
                 traces: Sequence[complex],
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[complex, complex]:
    """
    Charges matching the regular-part traces.

    Solves (2^{1-nu_k} / Gamma(nu_k)) sum_k' M_kk' q^(k') = t_k.

    Raises:
        SingularExtensionError: If M(lambda) is numerically singular
    """
    matrix = extension_matrix(beta, alpha, lam)
    cond = matrix.condition
    if cond > tolerances.condition_singular:
        raise SingularExtensionError(
            f"M(lambda={lam:g}) is singular (condition {cond:.3g})", key="lambda")
    if cond > tolerances.condition_warning:
        warnings.warn(f"M(lambda={lam:g}) is ill-conditioned ({cond:.3g})", ConditioningWarning)
    scale = np.array([gamma_fn(abs(k + alpha)) * 2.0 ** (abs(k + alpha) - 1.0)
                      for k in CHANNELS])
    rhs = scale * np.asarray(traces, dtype=complex)
    q = np.linalg.solve(matrix.values, rhs)
    return complex(q[0]), complex(q[1])


def friedrichs_limit(alpha: float, bracket: Tuple[float, float],
                     magnitude: float = 1e8) -> List[BoundState]:
    """Bound states for beta = magnitude * identity; empty for large magnitude."""
    return bound_states(HermitianCoupling.diagonal(magnitude, magnitude), alpha, bracket)


def diagonal_root(b: float, k: int, alpha: float) -> Optional[float]:
    """Closed-form root (-b sin(pi alpha) / pi^2)^{1 / (2 nu_k)} of a diagonal factor."""
    if b >= 0.0:
        return None
    nu = abs(k + alpha)
    return (-b * math.sin(math.pi * alpha) / math.pi ** 2) ** (1.0 / (2.0 * nu))
