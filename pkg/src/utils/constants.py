"""Numerical constants, tolerances and default settings."""

from dataclasses import dataclass, fields, replace
from typing import Any, Dict

# Project identity
PROJECT_NAME = "abq-forms"
CSV_HEADER = "# abq-forms v1"
THREADS_ENV_VAR = "ABQ_THREADS"
FLOAT_FORMAT = ".17g"

# Special functions
BESSEL_CROSSOVER = 2.0
BESSEL_SERIES_TERMS = 40
BESSEL_TRAPEZOID_STEP = 0.05
BESSEL_EXP_CUTOFF = 760.0  # exp(-760) underflows
BESSEL_ORDER_EDGE = 0.02  # orders closer than this to 0 or 1 use the integral route

# Polar quadrature grid
GRID_ORDER = 16
GRID_REFINED_ORDER = 24
GRID_N_THETA = 256
GRID_RATIO = 0.7
GRID_R_MIN = 1e-6
GRID_SPLIT = 0.5
GRID_OUTER_WIDTH = 0.25
GRID_R_MAX = 12.0
TAIL_DIVERGENCE_MARGIN = 1e-4
TAIL_CANCELLATION = 1e-10  # angular means below this fraction of the modulus are noise

# Smooth saturation of capped profiles
CAP_MARGIN = 0.25

# Green functions
GREEN_TRUNCATION = 10.0  # in units of 1/lambda
GREEN_SPLIT = 2.0  # in units of 1/lambda
QUAD_LIMIT = 200

# Extensions
ROOT_SAMPLES = 200
TRACE_START_RADIUS = 1e-2
TRACE_RATIO = 0.5
TRACE_SMALLEST_RADIUS = 1e-5

# Spectral
SPECTRAL_R_MAX = 20.0
SPECTRAL_N = 400
SPECTRAL_GRADING = 2.0
SPECTRAL_MIN_N = 200
DEFAULT_RESOLVENT_Z = -1.0


@dataclass(frozen=True)
class Tolerances:
    """Every tolerance used by the library, in one place."""

    bessel_rel: float = 1e-10
    quadrature_rel: float = 1e-8
    quadrature_floor: float = 1e-13
    xi_budget: float = 1e-6
    divergence: float = 1e-6
    divergence_step: float = 1e-4
    root_xtol: float = 1e-12
    condition_warning: float = 1e8
    condition_singular: float = 1e12
    trace_convergence: float = 1e-6
    coarse_grid: float = 5e-2
    resolvent_residual: float = 1e-10
    near_spectrum: float = 1e-8
    pointwise: float = 1e-10

    def override(self, values: Dict[str, Any]) -> "Tolerances":
        """
        Return a copy with some tolerances replaced.

        Args:
            values: Mapping of tolerance name to new value

        Returns:
            A new Tolerances record

        Raises:
            KeyError: If a name is not a known tolerance
        """
        known = {f.name for f in fields(self)}
        for key in values:
            if key not in known:
                raise KeyError(key)
        return replace(self, **{key: float(value) for key, value in values.items()})


DEFAULT_TOLERANCES = Tolerances()
