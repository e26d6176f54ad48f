"""
Regular magnetic perturbations S.

A PerturbationField is an immutable description of a divergence-free
vector potential with its value at the origin and a Lipschitz bound there.
Azimuthal fields S = s(r) x_perp / |x| keep their profile s so that the
spectral module can reduce them mode by mode.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from src.utils.constants import CAP_MARGIN
from src.utils.errors import NonAzimuthalFieldError, ProfileError, ValidationError

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]
Evaluator = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class PerturbationField:
    """Regular vector potential S with the data the hypotheses refer to."""

    name: str
    evaluator: Evaluator
    s_at_origin: Tuple[float, float]
    lipschitz_bound: float
    uniformly_bounded: bool
    validity_radius: float = 1.0
    profile: Optional[Profile] = None

    def eval(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        """Cartesian components of S at the given points."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        sx, sy = self.evaluator(x, y)
        shape = np.broadcast(x, y).shape
        return np.broadcast_to(sx, shape), np.broadcast_to(sy, shape)

    @property
    def is_azimuthal(self) -> bool:
        return self.profile is not None

    @property
    def is_zero(self) -> bool:
        return self.lipschitz_bound == 0.0 and self.s_at_origin == (0.0, 0.0)

    def require_profile(self) -> Profile:
        """Azimuthal profile s(r), for mode-by-mode reductions."""
        if self.profile is None:
            raise NonAzimuthalFieldError(
                f"field '{self.name}' has no azimuthal profile", key="field")
        return self.profile

    def polar(self, R: np.ndarray, T: np.ndarray, shifted: bool = False
              ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Radial and angular components of S (or of S - S(0) when ``shifted``).

        Args:
            R: Radii, broadcastable against T
            T: Angles

        Returns:
            (S_r, S_theta) broadcast to the common shape
        """
        shape = np.broadcast(R, T).shape
        cos_t, sin_t = np.cos(T), np.sin(T)
        if self.profile is not None:
            s_r = np.zeros(shape)
            s_t = np.broadcast_to(self.profile(R), shape).astype(float)
        else:
            sx, sy = self.eval(R * cos_t, R * sin_t)
            s_r = sx * cos_t + sy * sin_t
            s_t = -sx * sin_t + sy * cos_t
        if shifted:
            s0x, s0y = self.s_at_origin
            s_r = s_r - (s0x * cos_t + s0y * sin_t)
            s_t = s_t - (-s0x * sin_t + s0y * cos_t)
        return np.broadcast_to(s_r, shape), np.broadcast_to(s_t, shape)


def _azimuthal_evaluator(profile: Profile) -> Evaluator:
    def evaluate(x, y):
        r = np.hypot(x, y)
        safe = np.where(r > 0.0, r, 1.0)
        factor = np.where(r > 0.0, profile(safe) / safe, 0.0)
        return -factor * y, factor * x
    return evaluate


def _capped(profile: Profile, cap_radius: float, margin: float = CAP_MARGIN) -> Profile:
    # s(R sigma(r/R)), sigma(t) = t for t <= 1 and 1 + m tanh((t-1)/m) beyond
    def capped(r):
        t = np.asarray(r, dtype=float) / cap_radius
        sigma = np.where(t <= 1.0, t, 1.0 + margin * np.tanh((t - 1.0) / margin))
        return profile(cap_radius * sigma)
    return capped


def _estimate_lipschitz(profile: Profile, radius: float) -> float:
    r = np.linspace(radius / 4000.0, radius, 4000)
    return 1.01 * float(np.max(np.abs(profile(r)) / r))


def make_azimuthal_field(s_profile: Profile, cap_radius: Optional[float] = None,
                         name: str = "azimuthal",
                         lipschitz_bound: Optional[float] = None,
                         bounded: bool = False) -> PerturbationField:
    """
    Build S(x) = s(|x|) x_perp / |x| from a radial profile.

    Args:
        s_profile: Vectorized profile r -> s(r) with s(0) = 0
        cap_radius: Saturate the profile smoothly beyond this radius
        name: Label used in logs and output files
        lipschitz_bound: Declared bound on |S(x)| / |x|; estimated when omitted
        bounded: Declare the profile itself bounded (no cap needed)

    Returns:
        The azimuthal PerturbationField

    Raises:
        ProfileError: If s(0) != 0 or the cap radius is not positive
    """
    s0 = float(np.asarray(s_profile(np.zeros(1)), dtype=float).reshape(-1)[0])
    if abs(s0) > 1e-14:
        raise ProfileError(f"azimuthal profile must vanish at r=0, got s(0)={s0}", key="field")
    profile = s_profile
    if cap_radius is not None:
        if not cap_radius > 0.0:
            raise ProfileError(f"cap radius must be positive, got {cap_radius}", key="cap_radius")
        profile = _capped(s_profile, cap_radius)
    if lipschitz_bound is None:
        lipschitz_bound = _estimate_lipschitz(profile, 1.0)
    return PerturbationField(
        name=name,
        evaluator=_azimuthal_evaluator(profile),
        s_at_origin=(0.0, 0.0),
        lipschitz_bound=float(lipschitz_bound),
        uniformly_bounded=bounded or cap_radius is not None,
        profile=profile,
    )


def zero_field() -> PerturbationField:
    """S = 0."""
    return make_azimuthal_field(lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                                name="zero", lipschitz_bound=0.0, bounded=True)


def make_homogeneous_field(B: float, cap_radius: Optional[float] = None) -> PerturbationField:
    """Symmetric gauge of a homogeneous field, S = (B/2) x_perp, optionally capped."""
    return make_azimuthal_field(lambda r: 0.5 * B * np.asarray(r, dtype=float),
                                cap_radius=cap_radius, name="homogeneous",
                                lipschitz_bound=0.5 * abs(B))


def make_constant_field(s0: Tuple[float, float]) -> PerturbationField:
    """Pure gauge S = S(0)."""
    s0x, s0y = float(s0[0]), float(s0[1])

    def evaluate(x, y):
        return np.full(np.shape(x), s0x), np.full(np.shape(x), s0y)

    return PerturbationField(name="constant", evaluator=evaluate, s_at_origin=(s0x, s0y),
                             lipschitz_bound=0.0, uniformly_bounded=True)


def make_stream_field(amplitude: float = 0.5, width: float = 0.7,
                      center: Tuple[float, float] = (0.8, 0.3)) -> PerturbationField:
    """
    Non-azimuthal S = grad_perp Psi with a Gaussian stream function.

    Psi(x) = amplitude * exp(-|x - center|^2 / width^2), so S(0) != 0 as soon
    as the centre is off the origin. Divergence-free by construction.
    """
    if not width > 0.0:
        raise ProfileError(f"width must be positive, got {width}", key="width")
    cx, cy = float(center[0]), float(center[1])
    scale = 2.0 * amplitude / width ** 2

    def evaluate(x, y):
        dx, dy = x - cx, y - cy
        psi = np.exp(-(dx * dx + dy * dy) / width ** 2)
        # (-d_y Psi, d_x Psi)
        return scale * dy * psi, -scale * dx * psi

    sx0, sy0 = evaluate(np.zeros(1), np.zeros(1))
    return PerturbationField(
        name="stream",
        evaluator=evaluate,
        s_at_origin=(float(sx0[0]), float(sy0[0])),
        lipschitz_bound=2.0 * scale,
        uniformly_bounded=True,
    )


class TabulatedProfile:
    """Cubic-spline profile s(r) read from a two-column CSV file (r, s)."""

    def __init__(self, path: str):
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        if data.shape[1] != 2 or data.shape[0] < 4:
            raise ProfileError(f"expected at least 4 rows of 'r,s' in {path}", key="path")
        r, s = data[:, 0], data[:, 1]
        if r[0] != 0.0 or np.any(np.diff(r) <= 0.0):
            raise ProfileError("radii must start at 0 and increase", key="path")
        self.path = path
        self.r_last = float(r[-1])
        self.spline = CubicSpline(r, s)
        logger.debug("loaded %d profile samples from %s", r.size, path)

    def __call__(self, r):
        return self.spline(np.clip(np.asarray(r, dtype=float), 0.0, self.r_last))


def load_tabulated_profile(path: str) -> TabulatedProfile:
    """Read an azimuthal profile table; values beyond the last radius are held."""
    return TabulatedProfile(path)


def make_tabulated_field(path: str) -> PerturbationField:
    profile = load_tabulated_profile(path)
    return make_azimuthal_field(profile, name="tabulated", bounded=True)


def divergence_check(field: PerturbationField, radius: float = 1.0, n: int = 41,
                     h: float = 1e-4) -> Tuple[float, float]:
    """
    Central-difference divergence of S on a square lattice covering the disk.

    Returns:
        (max |div S|, max |S|) over lattice points inside the disk
    """
    if n < 3:
        raise ValidationError(f"need n >= 3 lattice points, got {n}", key="n")
    axis = np.linspace(-radius, radius, n)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    inside = x * x + y * y <= radius * radius
    x, y = x[inside], y[inside]
    sx_plus, _ = field.eval(x + h, y)
    sx_minus, _ = field.eval(x - h, y)
    _, sy_plus = field.eval(x, y + h)
    _, sy_minus = field.eval(x, y - h)
    div = (sx_plus - sx_minus + sy_plus - sy_minus) / (2.0 * h)
    sx, sy = field.eval(x, y)
    return float(np.max(np.abs(div))), float(np.max(np.hypot(sx, sy)))


def lipschitz_check(field: PerturbationField, radius: Optional[float] = None,
                    n: int = 2000, n_theta: int = 16) -> float:
    """Largest sampled |S(x) - S(0)| / |x| over the validity disk."""
    radius = field.validity_radius if radius is None else radius
    r = np.linspace(radius / n, radius, n)[:, None]
    t = 2.0 * math.pi * np.arange(n_theta)[None, :] / n_theta
    sx, sy = field.eval(r * np.cos(t), r * np.sin(t))
    s0x, s0y = field.s_at_origin
    return float(np.max(np.hypot(sx - s0x, sy - s0y) / r))
