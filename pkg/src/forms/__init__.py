"""
Quadratic forms of the Aharonov-Bohm operator with a regular perturbation.

Polar functions and trial functions, the Friedrichs form, the Xi coupling
matrix and the full Q^(beta) with its lambda/cutoff re-representations.
"""

from .polar_functions import (
    CancellingSum,
    CutoffFunction,
    EtaFunction,
    GaugePhase,
    GreenComponent,
    GriddedField,
    ModalFunction,
    PolarFunction,
    PolarSample,
    ProductFunction,
    RadialMode,
    ScaledFunction,
    SumFunction,
    ZeroFunction,
)
from .trial_function import (
    HermitianCoupling,
    TrialFunction,
    minimal_rate,
    random_coupling,
    random_trial_function,
)
from .friedrichs import (
    covariant_gradient,
    extended_friedrichs_form,
    form_domain_check,
    friedrichs_form,
    l2_norm_squared,
)
from .xi_matrix import XiMatrix, xi_matrix
from .qbeta import (
    CoercivityReport,
    QBetaBreakdown,
    change_cutoff,
    change_lambda,
    charge_diagonal,
    coercivity_probe,
    coercivity_sweep,
    form_grid,
    qbeta_breakdown,
    qbeta_eval,
)

__all__ = [
    'CancellingSum',
    'CutoffFunction',
    'EtaFunction',
    'GaugePhase',
    'GreenComponent',
    'GriddedField',
    'ModalFunction',
    'PolarFunction',
    'PolarSample',
    'ProductFunction',
    'RadialMode',
    'ScaledFunction',
    'SumFunction',
    'ZeroFunction',
    'HermitianCoupling',
    'TrialFunction',
    'minimal_rate',
    'random_coupling',
    'random_trial_function',
    'covariant_gradient',
    'extended_friedrichs_form',
    'form_domain_check',
    'friedrichs_form',
    'l2_norm_squared',
    'XiMatrix',
    'xi_matrix',
    'CoercivityReport',
    'QBetaBreakdown',
    'change_cutoff',
    'change_lambda',
    'charge_diagonal',
    'coercivity_probe',
    'coercivity_sweep',
    'form_grid',
    'qbeta_breakdown',
    'qbeta_eval',
]
