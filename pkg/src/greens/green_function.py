"""
s-wave and p-wave Green functions G^(k)_lambda = lambda^nu K_nu(lambda r) e^{i k theta}.

Only k = 0 and k = -1 give square-integrable solutions of the unperturbed
defect equation; nu = |k + alpha|. Radial operations work with the real
modulus profile, green_eval carries the phase.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from src.specfun import (
    bessel_k,
    bessel_k_derivative,
    bessel_k_second_derivative,
    gamma_fn,
)
from src.utils.constants import (
    DEFAULT_TOLERANCES,
    GREEN_SPLIT,
    GREEN_TRUNCATION,
    QUAD_LIMIT,
)
from src.utils.errors import (
    AsymptoticRangeError,
    NonConvergenceError,
    OriginSingularityError,
    ValidationError,
)
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
CHANNELS = (0, -1)


@dataclass(frozen=True)
class GreenFunction:
    """The triple (k, alpha, lambda) identifying G^(k)_lambda."""

    k: int
    alpha: float
    lam: float

    def __post_init__(self):
        if self.k not in CHANNELS:
            raise ValidationError(f"k must be 0 or -1, got {self.k}", key="k")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie in (0,1), got {self.alpha}", key="alpha")
        if not self.lam > 0.0:
            raise ValidationError(f"lambda must be positive, got {self.lam}", key="lambda")

    @property
    def nu(self) -> float:
        return abs(self.k + self.alpha)

    def radial(self, r: ArrayLike) -> ArrayLike:
        """Modulus profile lambda^nu K_nu(lambda r)."""
        _check_radius(r)
        return self.lam ** self.nu * bessel_k(self.nu, self.lam * np.asarray(r, dtype=float))

    def radial_derivatives(self, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        """Profile f and its first two derivatives in r."""
        _check_radius(r)
        x = self.lam * np.asarray(r, dtype=float)
        scale = self.lam ** self.nu
        return (scale * bessel_k(self.nu, x),
                scale * self.lam * bessel_k_derivative(self.nu, x),
                scale * self.lam ** 2 * bessel_k_second_derivative(self.nu, x))


def _check_radius(r: ArrayLike):
    if np.any(~(np.asarray(r, dtype=float) > 0.0)):
        raise OriginSingularityError("Green functions diverge at r = 0", key="r")


def green_eval(g: GreenFunction, r: ArrayLike, theta: ArrayLike) -> Union[complex, np.ndarray]:
    """
    G^(k)_lambda(r, theta) = lambda^nu K_nu(lambda r) e^{i k theta}.

    Args:
        g: Green function
        r: Radius, r > 0
        theta: Polar angle

    Returns:
        Complex value(s)

    Raises:
        OriginSingularityError: If r <= 0
    """
    value = g.radial(r) * np.exp(1j * g.k * np.asarray(theta, dtype=float))
    return complex(value) if np.ndim(value) == 0 else value


def green_norm_closed(g: GreenFunction) -> float:
    """Squared L^2 norm pi^2 nu lambda^(2 nu - 2) / sin(pi alpha)."""
    return math.pi ** 2 * g.nu / math.sin(math.pi * g.alpha) * g.lam ** (2.0 * g.nu - 2.0)


def green_norm_quadrature(g: GreenFunction,
                          rel_tol: float = DEFAULT_TOLERANCES.quadrature_rel) -> float:
    """
    Squared L^2 norm by adaptive quadrature.

    2 pi int_0^inf lambda^(2 nu) K_nu(lambda r)^2 r dr, split at 2/lambda,
    truncated at 10/lambda; the remainder uses K_nu(x)^2 ~ pi e^{-2x} / (2x).
    The inner panel is mapped by r = split * u^p with p = 1 / (2 - 2 nu),
    which turns the r^(1 - 2 nu) endpoint singularity into a bounded integrand.

    Raises:
        ValidationError: If rel_tol < 1e-10
        NonConvergenceError: If the adaptive quadrature exhausts its budget
    """
    if rel_tol < 1e-10:
        raise ValidationError(f"rel_tol must be >= 1e-10, got {rel_tol}", key="rel_tol")
    nu, lam = g.nu, g.lam
    scale = lam ** (2.0 * nu)

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        return scale * bessel_k(nu, lam * r) ** 2 * r

    split = GREEN_SPLIT / lam
    truncation = GREEN_TRUNCATION / lam
    power = 1.0 / (2.0 - 2.0 * nu)

    def mapped(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return integrand(split * u ** power) * split * power * u ** (power - 1.0)

    total = 0.0
    for func, lo, hi in ((mapped, 0.0, 1.0), (integrand, split, truncation)):
        result = quad(func, lo, hi, epsabs=0.0, epsrel=0.1 * rel_tol,
                      limit=QUAD_LIMIT, full_output=1)
        if len(result) > 3:
            raise NonConvergenceError(
                f"adaptive quadrature on [{lo:g}, {hi:g}] failed: {result[3]}",
                key="green_norm_quadrature")
        total += result[0]
        logger.debug("norm panel [%g, %g]: %.17g (+- %.3g)", lo, hi, result[0], result[1])
    x_tail = GREEN_TRUNCATION
    tail = scale / lam ** 2 * 0.25 * math.pi * math.exp(-2.0 * x_tail)
    return 2.0 * math.pi * (total + tail)


def asymptotic_coefficients(g: GreenFunction) -> Tuple[float, float]:
    """Coefficients of r^-nu and r^nu in the small-r expansion."""
    nu = g.nu
    leading = gamma_fn(nu) * 2.0 ** (nu - 1.0)
    second = gamma_fn(-nu) * 2.0 ** (-1.0 - nu) * g.lam ** (2.0 * nu)
    return leading, second


def green_asymptotic(g: GreenFunction, r: ArrayLike) -> ArrayLike:
    """
    Two-term small-r expansion of the radial profile (phase left to the caller).

    Gamma(nu) 2^(nu-1) r^-nu + Gamma(-nu) 2^(-1-nu) lambda^(2 nu) r^nu.

    Raises:
        AsymptoticRangeError: If lambda r >= 1 for any r
        OriginSingularityError: If r <= 0
    """
    _check_radius(r)
    arr = np.asarray(r, dtype=float)
    if np.any(g.lam * arr >= 1.0):
        raise AsymptoticRangeError("expansion valid only for lambda * r < 1",
                                   key="green_asymptotic")
    leading, second = asymptotic_coefficients(g)
    value = leading * arr ** (-g.nu) + second * arr ** g.nu
    return float(value) if np.ndim(value) == 0 else value


def asymptotic_remainder_slope(g: GreenFunction, radii: Sequence[float]) -> float:
    """Log-log slope of |exact - two-term| against r; expected 2 - nu."""
    r = np.asarray(radii, dtype=float)
    remainder = np.abs(g.radial(r) - green_asymptotic(g, r))
    slope, _ = np.polyfit(np.log(r), np.log(remainder), 1)
    return float(slope)


def defect_residual(g: GreenFunction, r: ArrayLike, shift: float = 0.0) -> ArrayLike:
    """
    Normalized residual of the radial defect equation.

    |-f'' - f'/r + ((k+alpha)^2 / r^2 + lambda^2) f| / (|f| + |f''|), where
    ``shift`` is added to (k+alpha)^2 (non-zero only for negative controls).
    """
    f, df, d2f = g.radial_derivatives(r)
    arr = np.asarray(r, dtype=float)
    potential = ((g.k + g.alpha) ** 2 + shift) / arr ** 2 + g.lam ** 2
    residual = np.abs(-d2f - df / arr + potential * f) / (np.abs(f) + np.abs(d2f))
    return float(residual) if np.ndim(residual) == 0 else residual


def green_radial(g: GreenFunction, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """Modulus profile f(r) = lambda^nu K_nu(lambda r) with f' and f''."""
    return g.radial_derivatives(r)


def cross_term_orthogonality(alpha: float, lam: float,
                             eta: Callable[[np.ndarray], np.ndarray],
                             grid: Optional[PolarGrid] = None) -> float:
    """
    |<G^(0), eta G^(-1)>| for a radial weight eta, by 2D quadrature.

    The angular factor e^{-i theta} integrates to zero, so the result only
    measures the quadrature error.
    """
    grid = PolarGrid() if grid is None else grid
    s_wave = GreenFunction(0, alpha, lam)
    p_wave = GreenFunction(-1, alpha, lam)
    R, T = grid.R, grid.T
    weight = np.asarray(eta(grid.r), dtype=float)[:, None]
    integrand = np.conj(green_eval(s_wave, R, T)) * weight * green_eval(p_wave, R, T)
    return abs(grid.integrate(integrand))
