"""Special functions: real Gamma and modified Bessel K of fractional order."""

from src.specfun.gamma import gamma_fn, log_gamma
from src.specfun.bessel import (
    bessel_k,
    bessel_k_derivative,
    bessel_k_integral,
    bessel_k_second_derivative,
    bessel_k_series,
)

__all__ = [
    'gamma_fn',
    'log_gamma',
    'bessel_k',
    'bessel_k_derivative',
    'bessel_k_integral',
    'bessel_k_second_derivative',
    'bessel_k_series',
]
