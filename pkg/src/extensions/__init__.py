"""
Singular self-adjoint extensions.

The extension matrix and its determinant, bound states for S = 0, charge
solving from boundary traces, and the correction term of the operator action.
"""

from .extension_matrix import (
    BoundState,
    ExtensionMatrix,
    bound_states,
    charge_solve,
    condition_number,
    diagonal_root,
    extension_determinant,
    extension_matrix,
    friedrichs_limit,
)
from .boundary import (
    TraceResult,
    aitken_extrapolate,
    boundary_trace,
    mode_average,
    richardson_extrapolate,
    singular_trace,
    trace_radii,
)
from .correction import hbeta_apply_correction

__all__ = [
    'BoundState',
    'ExtensionMatrix',
    'bound_states',
    'charge_solve',
    'condition_number',
    'diagonal_root',
    'extension_determinant',
    'extension_matrix',
    'friedrichs_limit',
    'TraceResult',
    'aitken_extrapolate',
    'boundary_trace',
    'mode_average',
    'richardson_extrapolate',
    'singular_trace',
    'trace_radii',
    'hbeta_apply_correction',
]
