"""
Green functions of the unperturbed Aharonov-Bohm operator.

Closed-form and quadrature norms, the small-r expansion and the residual of
the radial defect equation for the two square-integrable channels.
"""

from .green_function import (
    CHANNELS,
    GreenFunction,
    asymptotic_coefficients,
    asymptotic_remainder_slope,
    cross_term_orthogonality,
    defect_residual,
    green_asymptotic,
    green_eval,
    green_norm_closed,
    green_norm_quadrature,
    green_radial,
)

__all__ = [
    'CHANNELS',
    'GreenFunction',
    'asymptotic_coefficients',
    'asymptotic_remainder_slope',
    'cross_term_orthogonality',
    'defect_residual',
    'green_asymptotic',
    'green_eval',
    'green_norm_closed',
    'green_norm_quadrature',
    'green_radial',
]
