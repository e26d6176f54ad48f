"""Flux reduction, vector potentials, cutoff and recovery profiles, angular averages."""

from src.fields.flux import FluxParameter, a_alpha_eval, reduce_flux
from src.fields.potentials import (
    PerturbationField,
    divergence_check,
    lipschitz_check,
    load_tabulated_profile,
    make_azimuthal_field,
    make_constant_field,
    make_homogeneous_field,
    make_stream_field,
    make_tabulated_field,
    zero_field,
)
from src.fields.profiles import Cutoff, RecoveryProfile, cutoff_eval, eta_eval
from src.fields.averaging import angular_average

__all__ = [
    'FluxParameter',
    'a_alpha_eval',
    'reduce_flux',
    'PerturbationField',
    'divergence_check',
    'lipschitz_check',
    'load_tabulated_profile',
    'make_azimuthal_field',
    'make_constant_field',
    'make_homogeneous_field',
    'make_stream_field',
    'make_tabulated_field',
    'zero_field',
    'Cutoff',
    'RecoveryProfile',
    'cutoff_eval',
    'eta_eval',
    'angular_average',
]
