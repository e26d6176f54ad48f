"""
Trial functions psi = phi_lambda + e^{-i S(0).x} chi sum_k q^(k) G^(k)_lambda.

Index 0 of every charge vector and coupling matrix refers to the s-wave
channel k = 0, index 1 to the p-wave channel k = -1.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from src.fields.potentials import PerturbationField
from src.fields.profiles import Cutoff
from src.forms.polar_functions import (
    CutoffFunction,
    GaugePhase,
    GreenComponent,
    ModalFunction,
    PolarFunction,
    ScaledFunction,
    SumFunction,
    ZeroFunction,
)
from src.greens.green_function import CHANNELS, GreenFunction
from src.utils.errors import InsufficientDecayError, ValidationError

logger = logging.getLogger(__name__)

Charges = Tuple[complex, complex]


@dataclass(frozen=True)
class HermitianCoupling:
    """The 2x2 Hermitian matrix beta labelling the extension."""

    b00: float = 0.0
    b11: float = 0.0
    b01: complex = 0.0

    def __post_init__(self):
        for name in ("b00", "b11"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ValidationError(f"diagonal entry must be a finite real, got {value}",
                                      key=name)
        if not np.isfinite(complex(self.b01)):
            raise ValidationError(f"off-diagonal entry must be finite, got {self.b01}",
                                  key="b01")

    @classmethod
    def diagonal(cls, b00: float, b11: float) -> "HermitianCoupling":
        return cls(float(b00), float(b11), 0.0)

    @classmethod
    def from_matrix(cls, matrix, atol: float = 1e-14) -> "HermitianCoupling":
        """Build from a 2x2 array, rejecting non-Hermitian input."""
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2) or np.max(np.abs(m - m.conj().T)) > atol:
            raise ValidationError("beta must be a Hermitian 2x2 matrix", key="beta")
        return cls(float(m[0, 0].real), float(m[1, 1].real), complex(m[0, 1]))

    def matrix(self) -> np.ndarray:
        b01 = complex(self.b01)
        return np.array([[self.b00, b01], [b01.conjugate(), self.b11]], dtype=complex)

    def as_dict(self) -> dict:
        b01 = complex(self.b01)
        return {"b00": self.b00, "b11": self.b11, "b01_re": b01.real, "b01_im": b01.imag}


def minimal_rate(alpha: float) -> float:
    """Smallest admissible vanishing rate of a regular part, min_k |k + alpha|."""
    return min(abs(k + alpha) for k in CHANNELS)


@dataclass(frozen=True)
class TrialFunction:
    """
    Element of the form domain written with respect to a given lambda and cutoff.

    Attributes:
        phi: Regular part phi_lambda
        lam: Spectral parameter lambda > 0
        charges: (q^(0), q^(-1))
        cutoff: Cutoff chi localizing the Green functions
        field: Regular perturbation S
        alpha: Reduced flux in (0, 1)
    """

    phi: PolarFunction
    lam: float
    charges: Charges
    cutoff: Cutoff
    field: PerturbationField
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie in (0,1), got {self.alpha}", key="alpha")
        if not self.lam > 0.0:
            raise ValidationError(f"lambda must be positive, got {self.lam}", key="lambda")
        if len(self.charges) != 2 or not all(np.isfinite(complex(q)) for q in self.charges):
            raise ValidationError(f"need two finite charges, got {self.charges}", key="charges")
        required = minimal_rate(self.alpha)
        if self.phi.vanishing_rate < required - 1e-12:
            raise InsufficientDecayError(
                f"regular part vanishes like r^{self.phi.vanishing_rate:g}, "
                f"need at least r^{required:g}", key="phi")

    @property
    def greens(self) -> Tuple[GreenFunction, GreenFunction]:
        return tuple(GreenFunction(k, self.alpha, self.lam) for k in CHANNELS)

    @property
    def gauge(self) -> GaugePhase:
        return GaugePhase(self.field.s_at_origin)

    @property
    def has_charges(self) -> bool:
        return any(complex(q) != 0.0 for q in self.charges)

    def singular_part(self, lam: Optional[float] = None,
                      cutoff: Optional[Cutoff] = None) -> PolarFunction:
        """e^{-i S(0).x} chi sum_k q^(k) G^(k), optionally for another lambda or cutoff."""
        lam = self.lam if lam is None else lam
        cutoff = self.cutoff if cutoff is None else cutoff
        terms = [ScaledFunction(q, GreenComponent(GreenFunction(k, self.alpha, lam)))
                 for k, q in zip(CHANNELS, self.charges) if complex(q) != 0.0]
        if not terms:
            return ZeroFunction()
        localized = CutoffFunction(cutoff) * SumFunction(terms)
        gauge = self.gauge
        return localized if gauge.trivial else gauge * localized

    def total(self) -> PolarFunction:
        """The represented function psi."""
        if not self.has_charges:
            return self.phi
        return self.phi + self.singular_part()

    def evaluate(self, x, y) -> np.ndarray:
        """psi at Cartesian points (none of them at the origin)."""
        return self.total()(x, y)

    def with_representation(self, phi: PolarFunction, lam: float,
                            cutoff: Optional[Cutoff] = None) -> "TrialFunction":
        return replace(self, phi=phi, lam=lam, cutoff=self.cutoff if cutoff is None else cutoff)


def random_trial_function(rng: np.random.Generator, alpha: float, field: PerturbationField,
                          cutoff: Cutoff, lam: float) -> TrialFunction:
    """
    Seeded random trial function.

    The regular part mixes the angular modes -1, 0, 1 as
    c r^{|m+alpha|+1} e^{-r^2/w} (1 + d r); charges are complex normal.

    Args:
        rng: Random generator, e.g. numpy.random.default_rng(seed)
        alpha: Reduced flux
        field: Regular perturbation
        cutoff: Cutoff of the singular part
        lam: Spectral parameter of the representation

    Returns:
        A TrialFunction
    """
    modes = []
    for m in (-1, 0, 1):
        coefficient = complex(rng.normal(), rng.normal())
        width = rng.uniform(0.5, 1.5)
        slope = rng.uniform(-0.5, 0.5)
        modes.append(ModalFunction(coefficient, m, abs(m + alpha) + 1.0, width, slope))
    charges = (complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal()))
    return TrialFunction(SumFunction(modes), lam, charges, cutoff, field, alpha)


def random_coupling(rng: np.random.Generator) -> HermitianCoupling:
    """Hermitian beta with standard normal entries."""
    return HermitianCoupling(float(rng.normal()), float(rng.normal()),
                             complex(rng.normal(), rng.normal()))
