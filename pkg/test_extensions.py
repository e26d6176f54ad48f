"""Tests for the extension matrix, bound states, boundary traces and the correction term."""

import math
import warnings

import numpy as np
import pytest

from src.extensions import (
    aitken_extrapolate,
    bound_states,
    boundary_trace,
    charge_solve,
    condition_number,
    diagonal_root,
    extension_determinant,
    extension_matrix,
    friedrichs_limit,
    hbeta_apply_correction,
    mode_average,
    richardson_extrapolate,
    singular_trace,
    trace_radii,
)
from src.fields import Cutoff, make_homogeneous_field, zero_field
from src.forms import GreenComponent, HermitianCoupling, ModalFunction, TrialFunction
from src.greens import GreenFunction
from src.specfun import gamma_fn
from src.spectral import assemble_mode_operator, mode_profile
from src.utils.errors import BracketWarning, SingularExtensionError, ValidationError


def test_extension_matrix_is_hermitian():
    beta = HermitianCoupling(1.0, -2.0, 0.5 + 0.5j)
    m = extension_matrix(beta, 0.3, 1.5).values
    np.testing.assert_allclose(m, m.conj().T)


def test_diagonal_determinant():
    beta = HermitianCoupling.diagonal(-1.0, 2.0)
    d0 = math.pi ** 2 * 0.8 ** 0.8 / math.sin(0.4 * math.pi)
    d1 = math.pi ** 2 * 0.8 ** 1.2 / math.sin(0.4 * math.pi)
    assert extension_determinant(beta, 0.4, 0.8) == pytest.approx((d0 - 1.0) * (d1 + 2.0))


def test_bound_state_closed_form():
    beta = HermitianCoupling.diagonal(-math.pi ** 2, math.pi ** 2)
    states = bound_states(beta, 0.5, (0.1, 10.0))
    assert len(states) == 1
    assert states[0].lam == pytest.approx(1.0, abs=1e-10)
    assert states[0].energy == pytest.approx(-1.0, abs=1e-9)
    assert abs(states[0].null_vector[0]) == pytest.approx(1.0, abs=1e-8)
    assert abs(states[0].null_vector[1]) < 1e-8


def test_p_wave_bound_state():
    beta = HermitianCoupling.diagonal(math.pi ** 2, -2.0)
    states = bound_states(beta, 0.3, (1e-3, 10.0))
    assert len(states) == 1
    assert states[0].lam == pytest.approx(diagonal_root(-2.0, -1, 0.3), rel=1e-10)


def test_diagonal_root():
    assert diagonal_root(1.0, 0, 0.5) is None
    assert diagonal_root(-math.pi ** 2, 0, 0.5) == pytest.approx(1.0)


def test_coupled_bound_states_are_null_vectors():
    beta = HermitianCoupling(-20.0, -15.0, 3.0 - 1.0j)
    states = bound_states(beta, 0.4, (1e-3, 50.0))
    assert len(states) == 2
    for state in states:
        m = extension_matrix(beta, 0.4, state.lam).values
        assert np.linalg.norm(m @ state.null_vector) < 1e-7 * np.linalg.norm(m)


def test_friedrichs_limit_has_no_bound_states():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert friedrichs_limit(0.5, (0.1, 10.0)) == []


def test_bracket_warning():
    beta = HermitianCoupling.diagonal(-100.0, 1.0)
    with pytest.warns(BracketWarning):
        assert bound_states(beta, 0.5, (0.1, 5.0)) == []


def test_bound_states_validate_bracket():
    with pytest.raises(ValidationError):
        bound_states(HermitianCoupling(), 0.5, (2.0, 1.0))


def test_charge_solve():
    beta = HermitianCoupling(1.0, 0.5, 0.2 - 0.1j)
    traces = (0.3 + 0.1j, -0.7)
    q = np.array(charge_solve(beta, 0.35, 1.2, traces))
    m = extension_matrix(beta, 0.35, 1.2).values
    scale = np.array([gamma_fn(nu) * 2.0 ** (nu - 1.0) for nu in (0.35, 0.65)])
    np.testing.assert_allclose(m @ q, scale * np.array(traces), rtol=1e-12)


def test_charge_solve_singular():
    beta = HermitianCoupling.diagonal(-math.pi ** 2, math.pi ** 2)
    with pytest.raises(SingularExtensionError):
        charge_solve(beta, 0.5, 1.0, (1.0, 1.0))


def test_aitken_on_geometric_sequence():
    sequence = [2.0 + 0.5 ** n for n in range(8)]
    value, error = aitken_extrapolate(sequence, levels=1)
    assert value == pytest.approx(2.0, abs=1e-12)
    assert error < 1e-12


def test_trace_radii():
    radii = trace_radii()
    assert radii[0] == 1e-2
    assert radii[-1] <= 1e-5
    with pytest.raises(ValidationError):
        boundary_trace(lambda r: r, 0, 0.5, r_grid=[1e-2, 5e-3, 1e-3, 5e-4, 1e-5])


@pytest.mark.parametrize("k,alpha", [(0, 0.3), (-1, 0.6), (0, 0.5)])
def test_traces_of_a_two_term_profile(k, alpha):
    nu = abs(k + alpha)

    def profile(r):
        f = 1.5 * r ** (-nu) - 0.4 * r ** nu + 0.2 * r ** (nu + 2)
        df = (-1.5 * nu * r ** (-nu - 1) - 0.4 * nu * r ** (nu - 1)
              + 0.2 * (nu + 2) * r ** (nu + 1))
        return f, df

    trace = boundary_trace(profile, k, alpha)
    singular = singular_trace(profile, k, alpha)
    assert trace.converged and singular.converged
    assert trace.value == pytest.approx(-0.8 * nu, abs=1e-7)
    assert singular.value == pytest.approx(1.5, abs=1e-7)


def test_regular_part_has_zero_singular_trace():
    phi = ModalFunction(2.0, 0, 0.5, 1.0)
    profile = mode_average(phi, 0)
    assert abs(singular_trace(profile, 0, 0.5).value) < 1e-8
    trace = boundary_trace(profile, 0, 0.5)
    assert trace.converged
    assert trace.value == pytest.approx(2.0, abs=1e-6)


def test_green_function_traces():
    profile = mode_average(GreenComponent(GreenFunction(0, 0.5, 1.0)), 0)
    leading = math.sqrt(math.pi / 2.0)
    assert singular_trace(profile, 0, 0.5).value == pytest.approx(leading, abs=1e-7)
    assert boundary_trace(profile, 0, 0.5).value == pytest.approx(-leading, abs=1e-6)


def test_correction_vanishes_on_plateau_without_field():
    phi = ModalFunction(1.0, 0, 0.5, 1.0)
    psi = TrialFunction(phi, 1.0, (1.0 + 0.5j, -0.3j), Cutoff(1.0, 2.0), zero_field(), 0.5)
    values, grid = hbeta_apply_correction(psi)
    inside = grid.r < 1.0
    outside = grid.r > 2.0
    assert np.all(values[inside] == 0.0)
    assert np.all(values[outside] == 0.0)
    assert np.max(np.abs(values[~inside & ~outside])) > 0.0


def test_correction_with_field_reaches_the_origin():
    phi = ModalFunction(1.0, 0, 0.5, 1.0)
    field = make_homogeneous_field(1.0)
    psi = TrialFunction(phi, 1.0, (1.0, 0.0), Cutoff(1.0, 2.0), field, 0.5)
    values, grid = hbeta_apply_correction(psi)
    assert np.max(np.abs(values[grid.r < 1.0])) > 0.0
    assert np.all(values[grid.r > 2.0] == 0.0)


@pytest.mark.parametrize("alpha", [0.3, 0.6])
def test_aitken_and_richardson_on_a_flux_dependent_correction(alpha):
    nu = alpha
    c = 1.0

    def profile(r):
        return (r ** nu + c * r ** (2.0 - nu),
                nu * r ** (nu - 1.0) + c * (2.0 - nu) * r ** (1.0 - nu))

    aitken = boundary_trace(profile, 0, alpha)
    richardson = boundary_trace(profile, 0, alpha, method="richardson")
    assert aitken.value == pytest.approx(2.0 * nu, abs=1e-11)
    # leading correction is r^(2 - 2 nu), not r^2
    assert abs(richardson.value - 2.0 * nu) > 1e-9
    assert abs(richardson.value - 2.0 * nu) > 100.0 * abs(aitken.value - 2.0 * nu)


def test_richardson_removes_an_r_squared_correction():
    nu = 0.4

    def profile(r):
        return r ** nu + r ** (nu + 2.0), nu * r ** (nu - 1.0) + (nu + 2.0) * r ** (nu + 1.0)

    trace = boundary_trace(profile, 0, nu, method="richardson")
    assert trace.converged
    assert trace.value == pytest.approx(2.0 * nu, abs=1e-12)
    radii = trace_radii()
    samples = 2.0 * nu + (2.0 * nu + 2.0) * radii ** 2
    value, _ = richardson_extrapolate(samples, ratio=0.5, levels=1)
    assert value == pytest.approx(2.0 * nu, abs=1e-12)


def test_unknown_extrapolation_method():
    with pytest.raises(ValidationError):
        boundary_trace(lambda r: (r, np.ones_like(r)), 0, 0.5, method="shanks")


@pytest.mark.parametrize("k", [0, -1])
@pytest.mark.parametrize("alpha", [0.3, 0.5])
def test_friedrichs_eigenmodes_have_no_singular_part(k, alpha):
    op = assemble_mode_operator(k, alpha, lambda r: 0.5 * np.asarray(r, dtype=float))
    trace = singular_trace(mode_profile(op), k, alpha)
    assert np.isfinite(trace.value)
    assert abs(trace.value) <= 1e-4


def test_off_diagonal_bound_state_closed_form():
    alpha = 0.25
    b = math.pi ** 2 / math.sin(math.pi / 4.0) * np.exp(1j * math.pi / 3.0)
    beta = HermitianCoupling(0.0, 0.0, complex(b))
    states = bound_states(beta, alpha, (0.1, 10.0))
    assert len(states) == 1
    lam_star = states[0].lam
    assert lam_star == pytest.approx(abs(b) * math.sin(math.pi * alpha) / math.pi ** 2,
                                     abs=1e-10)
    assert lam_star == pytest.approx(1.0, abs=1e-10)
    assert states[0].energy == pytest.approx(-1.0, abs=1e-9)
    for lam in (lam_star - 1e-9, lam_star + 1e-9):
        assert condition_number(beta, alpha, lam) >= 1e8


def _radial_defect(g, r, h=1e-4):
    """(H + lambda^2)((chi - 1) G) on the mode of G, by central differences."""
    cutoff = Cutoff(1.0, 2.0)

    def w(x):
        return (cutoff.evaluate(x)[0] - 1.0) * g.radial(x)

    first = (w(r + h) - w(r - h)) / (2.0 * h)
    second = (w(r + h) - 2.0 * w(r) + w(r - h)) / (h * h)
    return (-second - first / r + ((g.k + g.alpha) / r) ** 2 * w(r)
            + g.lam ** 2 * w(r))


def test_correction_matches_finite_differences_in_the_annulus():
    alpha, lam = 0.3, 1.3
    charges = (0.7 - 0.2j, -0.4 + 0.9j)
    phi = ModalFunction(1.0, 0, 0.5, 1.0)
    psi = TrialFunction(phi, lam, charges, Cutoff(1.0, 2.0), zero_field(), alpha)
    values, grid = hbeta_apply_correction(psi)
    R = np.broadcast_to(grid.R, grid.shape)
    T = np.broadcast_to(grid.T, grid.shape)
    annulus = (R > 1.0 + 1e-3) & (R < 2.0 - 1e-3)
    r, theta = R[annulus], T[annulus]
    expected = np.zeros(r.shape, dtype=complex)
    for k, q in zip((0, -1), charges):
        g = GreenFunction(k, alpha, lam)
        expected += q * _radial_defect(g, r) * np.exp(1j * k * theta)
    assert r.size > 0
    scale = max(1.0, float(np.max(np.abs(expected))))
    assert np.max(np.abs(values[annulus] - expected)) <= 1e-5 * scale
