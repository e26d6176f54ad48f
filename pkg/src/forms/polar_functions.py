"""Complex functions on the punctured plane, sampled with their polar gradients."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from src.fields.profiles import Cutoff, RecoveryProfile
from src.greens.green_function import GreenFunction
from src.utils.errors import ValidationError

RadialProfile = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass
class PolarSample:
    """Value and gradient (d/dr, (1/r) d/dtheta) of a function at a set of points."""

    value: np.ndarray
    d_r: np.ndarray
    d_t: np.ndarray

    def __add__(self, other: "PolarSample") -> "PolarSample":
        return PolarSample(self.value + other.value, self.d_r + other.d_r, self.d_t + other.d_t)

    def __sub__(self, other: "PolarSample") -> "PolarSample":
        return PolarSample(self.value - other.value, self.d_r - other.d_r, self.d_t - other.d_t)

    def __mul__(self, other: "PolarSample") -> "PolarSample":
        return PolarSample(self.value * other.value,
                           self.d_r * other.value + self.value * other.d_r,
                           self.d_t * other.value + self.value * other.d_t)

    def scaled(self, c: complex) -> "PolarSample":
        return PolarSample(c * self.value, c * self.d_r, c * self.d_t)

    def squared_modulus(self) -> np.ndarray:
        return np.abs(self.value) ** 2


class PolarFunction(ABC):
    """Base class for the closures a trial function is assembled from.

    Every function declares the rate gamma with |f| = O(r^gamma) at the
    origin. Negative rates mark singular pieces such as Green functions.
    """

    def __init__(self, kind: str, vanishing_rate: float):
        """Initialize the function.

        Args:
            kind: Short label used in logs
            vanishing_rate: Exponent gamma of the behaviour at r -> 0
        """
        self.kind = kind
        self.vanishing_rate = float(vanishing_rate)

    @abstractmethod
    def sample(self, R: np.ndarray, T: np.ndarray) -> PolarSample:
        """Evaluate on broadcastable radii (R > 0) and angles."""

    def __call__(self, x, y) -> np.ndarray:
        """Complex values at Cartesian points."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.sample(np.hypot(x, y), np.arctan2(y, x)).value

    def __add__(self, other: "PolarFunction") -> "PolarFunction":
        return SumFunction((self, other))

    def __sub__(self, other: "PolarFunction") -> "PolarFunction":
        return SumFunction((self, ScaledFunction(-1.0, other)))

    def __mul__(self, other: "PolarFunction") -> "PolarFunction":
        return ProductFunction(self, other)

    def __rmul__(self, c: complex) -> "PolarFunction":
        return ScaledFunction(c, self)


def _angular(k: int, T: np.ndarray) -> np.ndarray:
    return np.exp(1j * k * T)


class RadialMode(PolarFunction):
    """f(r) e^{i k theta} for a profile returning (f, f')."""

    def __init__(self, profile: RadialProfile, k: int, vanishing_rate: float):
        super().__init__("mode", vanishing_rate)
        self.profile = profile
        self.k = int(k)

    def sample(self, R, T) -> PolarSample:
        f, df = self.profile(R)
        phase = _angular(self.k, T)
        return PolarSample(f * phase, df * phase, 1j * self.k * f / R * phase)


class ModalFunction(PolarFunction):
    """c r^p e^{-r^2 / w} (1 + d r) e^{i k theta}, smooth away from the origin."""

    def __init__(self, coefficient: complex, k: int, power: float, width: float,
                 slope: float = 0.0):
        if not width > 0.0:
            raise ValidationError(f"width must be positive, got {width}", key="width")
        super().__init__("modal", power)
        self.coefficient = complex(coefficient)
        self.k = int(k)
        self.power = float(power)
        self.width = float(width)
        self.slope = float(slope)

    def sample(self, R, T) -> PolarSample:
        p, w, d = self.power, self.width, self.slope
        gauss = np.exp(-R * R / w)
        poly = 1.0 + d * R
        f = R ** p * gauss * poly
        # logarithmic derivative p/r - 2r/w + d/(1 + d r)
        df = R ** p * gauss * (poly * (p / R - 2.0 * R / w) + d)
        phase = self.coefficient * _angular(self.k, T)
        return PolarSample(f * phase, df * phase, 1j * self.k * f / R * phase)


class GreenComponent(PolarFunction):
    """G^(k)_lambda as a polar function (rate -nu)."""

    def __init__(self, green: GreenFunction):
        super().__init__("green", -green.nu)
        self.green = green

    def sample(self, R, T) -> PolarSample:
        f, df, _ = self.green.radial_derivatives(R)
        phase = _angular(self.green.k, T)
        return PolarSample(f * phase, df * phase, 1j * self.green.k * f / R * phase)


class CutoffFunction(PolarFunction):
    def __init__(self, cutoff: Cutoff):
        super().__init__("cutoff", 0.0)
        self.cutoff = cutoff

    def sample(self, R, T) -> PolarSample:
        shape = np.broadcast(R, T).shape
        chi, d_chi, _ = self.cutoff.evaluate(R)
        return PolarSample(np.broadcast_to(chi, shape).astype(complex),
                           np.broadcast_to(d_chi, shape).astype(complex),
                           np.zeros(shape, dtype=complex))


class EtaFunction(PolarFunction):
    """Recovery profile eta, vanishing like r^alpha_n."""

    def __init__(self, profile: RecoveryProfile):
        super().__init__("eta", profile.alpha_n)
        self.profile = profile

    def sample(self, R, T) -> PolarSample:
        shape = np.broadcast(R, T).shape
        eta, d_eta = self.profile.evaluate(R)
        return PolarSample(np.broadcast_to(eta, shape).astype(complex),
                           np.broadcast_to(d_eta, shape).astype(complex),
                           np.zeros(shape, dtype=complex))


class GaugePhase(PolarFunction):
    """e^{-i S(0) . x}; identically 1 when S(0) = 0."""

    def __init__(self, s0: Tuple[float, float]):
        super().__init__("gauge", 0.0)
        self.s0 = (float(s0[0]), float(s0[1]))

    @property
    def trivial(self) -> bool:
        return self.s0 == (0.0, 0.0)

    def sample(self, R, T) -> PolarSample:
        s0x, s0y = self.s0
        cos_t, sin_t = np.cos(T), np.sin(T)
        value = np.exp(-1j * R * (s0x * cos_t + s0y * sin_t))
        s0_r = s0x * cos_t + s0y * sin_t
        s0_t = -s0x * sin_t + s0y * cos_t
        return PolarSample(value, -1j * s0_r * value, -1j * s0_t * value)


class SumFunction(PolarFunction):
    def __init__(self, terms: Iterable[PolarFunction]):
        self.terms = tuple(terms)
        if not self.terms:
            raise ValidationError("empty sum", key="terms")
        super().__init__("sum", min(t.vanishing_rate for t in self.terms))

    def sample(self, R, T) -> PolarSample:
        total = self.terms[0].sample(R, T)
        for term in self.terms[1:]:
            total = total + term.sample(R, T)
        return total


class ProductFunction(PolarFunction):
    def __init__(self, left: PolarFunction, right: PolarFunction):
        super().__init__("product", left.vanishing_rate + right.vanishing_rate)
        self.left = left
        self.right = right

    def sample(self, R, T) -> PolarSample:
        return self.left.sample(R, T) * self.right.sample(R, T)


class ScaledFunction(PolarFunction):
    def __init__(self, coefficient: complex, inner: PolarFunction):
        super().__init__("scaled", inner.vanishing_rate)
        self.coefficient = complex(coefficient)
        self.inner = inner

    def sample(self, R, T) -> PolarSample:
        return self.inner.sample(R, T).scaled(self.coefficient)


class ZeroFunction(PolarFunction):
    def __init__(self):
        super().__init__("zero", math.inf)

    def sample(self, R, T) -> PolarSample:
        zeros = np.zeros(np.broadcast(R, T).shape, dtype=complex)
        return PolarSample(zeros, zeros, zeros)


class GriddedField(PolarFunction):
    """
    A function known on a polar lattice (radii x uniform angles).

    Trigonometric interpolation in theta (FFT, modes |m| <= max_mode) and a
    cubic spline in r per mode. Below the first radius each mode continues
    as a power law with the declared rate; beyond the last radius the field
    is zero.
    """

    def __init__(self, radii: np.ndarray, values: np.ndarray, vanishing_rate: float,
                 max_mode: int = 16):
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=complex)
        if values.ndim != 2 or values.shape[0] != radii.size:
            raise ValidationError("values must have shape (len(radii), n_theta)", key="values")
        if radii.size < 4 or radii[0] <= 0.0 or np.any(np.diff(radii) <= 0.0):
            raise ValidationError("radii must be positive and increasing", key="radii")
        super().__init__("gridded", vanishing_rate)
        n_theta = values.shape[1]
        max_mode = min(int(max_mode), (n_theta - 1) // 2)
        coefficients = np.fft.fft(values, axis=1) / n_theta
        self.modes = np.arange(-max_mode, max_mode + 1)
        self.radii = radii
        self.spline = CubicSpline(radii, coefficients[:, self.modes], axis=0)
        self.derivative = self.spline.derivative()

    @classmethod
    def from_function(cls, func: PolarFunction, radii: np.ndarray, n_theta: int = 64,
                      max_mode: int = 16) -> "GriddedField":
        """Tabulate a closure on a lattice."""
        theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
        radii = np.asarray(radii, dtype=float)
        values = func.sample(radii[:, None], theta[None, :]).value
        return cls(radii, values, func.vanishing_rate, max_mode)

    def _coefficients(self, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        r0, r_last = self.radii[0], self.radii[-1]
        inside = np.clip(r, r0, r_last)
        c = self.spline(inside)
        dc = self.derivative(inside)
        below = (r < r0)[:, None]
        rate = self.vanishing_rate
        scale = (np.where(r < r0, r, r0) / r0)[:, None] ** rate
        c_low = self.spline(np.array([r0]))[0][None, :] * scale
        c = np.where(below, c_low, c)
        dc = np.where(below, rate * c_low / np.where(r < r0, r, r0)[:, None], dc)
        beyond = (r > r_last)[:, None]
        return np.where(beyond, 0.0, c), np.where(beyond, 0.0, dc)

    def sample(self, R, T) -> PolarSample:
        R = np.asarray(R, dtype=float)
        T = np.asarray(T, dtype=float)
        if R.ndim == 2 and T.ndim == 2 and R.shape[1] == 1 and T.shape[0] == 1:
            # lattice (nr, 1) x (1, nt): one spline evaluation per radius
            r = R[:, 0]
            c, dc = self._coefficients(r)
            phase = np.exp(1j * np.outer(self.modes, T[0]))
            return PolarSample(c @ phase, dc @ phase,
                               ((1j * self.modes[None, :] * c) @ phase) / r[:, None])
        R_b, T_b = np.broadcast_arrays(R, T)
        shape = R_b.shape
        r = R_b.reshape(-1)
        c, dc = self._coefficients(r)
        phase = np.exp(1j * T_b.reshape(-1)[:, None] * self.modes[None, :])
        value = np.sum(c * phase, axis=1)
        d_r = np.sum(dc * phase, axis=1)
        d_t = np.sum(1j * self.modes[None, :] * c * phase, axis=1) / r
        return PolarSample(value.reshape(shape), d_r.reshape(shape), d_t.reshape(shape))


class CancellingSum(SumFunction):
    """A sum whose singular pieces cancel; the caller declares the resulting rate."""

    def __init__(self, terms: Iterable[PolarFunction], vanishing_rate: float):
        super().__init__(terms)
        self.kind = "cancelling"
        self.vanishing_rate = float(vanishing_rate)
