"""
Angular-mode spectra, mode resolvents and the vanishing-flux studies.
"""

from .radial_grid import RadialGrid, graded_points
from .mode_operator import (
    ExtrapolatedSpectrum,
    ModeOperator,
    assemble_mode_operator,
    dirichlet_disk_level,
    eigenpairs,
    eigenvalues,
    extrapolated_eigenvalues,
    mode_profile,
    oscillator_levels,
)
from .resolvent import ResolventRow, ResolventStudy, gaussian_source, resolvent_apply, resolvent_study
from .gamma_study import (
    GammaRow,
    GammaStudy,
    damped_state,
    gamma_recovery_study,
    gaussian_state,
    singular_bound,
    singular_term_norm,
    sobolev_weight_norm,
)

__all__ = [
    'RadialGrid',
    'graded_points',
    'ExtrapolatedSpectrum',
    'ModeOperator',
    'assemble_mode_operator',
    'dirichlet_disk_level',
    'eigenpairs',
    'eigenvalues',
    'extrapolated_eigenvalues',
    'mode_profile',
    'oscillator_levels',
    'ResolventRow',
    'ResolventStudy',
    'gaussian_source',
    'resolvent_apply',
    'resolvent_study',
    'GammaRow',
    'GammaStudy',
    'damped_state',
    'gamma_recovery_study',
    'gaussian_state',
    'singular_bound',
    'singular_term_norm',
    'sobolev_weight_norm',
]
