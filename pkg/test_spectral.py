"""Tests for the radial mode operators, mode resolvents and the vanishing-flux studies."""

import math

import numpy as np
import pytest

from src.fields import make_homogeneous_field, make_stream_field
from src.spectral import (
    RadialGrid,
    assemble_mode_operator,
    damped_state,
    dirichlet_disk_level,
    eigenpairs,
    eigenvalues,
    extrapolated_eigenvalues,
    gamma_recovery_study,
    gaussian_source,
    gaussian_state,
    mode_profile,
    oscillator_levels,
    resolvent_apply,
    resolvent_study,
    singular_bound,
    singular_term_norm,
    sobolev_weight_norm,
)
from src.utils.errors import ValidationError

SWEEP = (0.2, 0.1, 0.05, 0.025, 0.0125)


def homogeneous(r):
    return 0.5 * np.asarray(r, dtype=float)


@pytest.mark.parametrize("r_max,n,grading", [(20.0, 100, 2.0), (20.0, 400, 0.5),
                                             (20.0, 400, 1.0), (0.0, 400, 2.0)])
def test_radial_grid_validation(r_max, n, grading):
    with pytest.raises(ValidationError):
        RadialGrid(r_max, n, grading)


def test_radial_grid_geometry():
    grid = RadialGrid()
    assert grid.faces[0] == 0.0 and grid.faces[-1] == pytest.approx(grid.r_max)
    assert np.all((grid.nodes > grid.faces[:-1]) & (grid.nodes < grid.faces[1:]))
    assert np.sum(grid.cell_volumes()) == pytest.approx(0.5 * grid.r_max ** 2)
    assert grid.refined().n == 2 * grid.n


def test_operator_is_symmetric_tridiagonal():
    op = assemble_mode_operator(1, 0.3, homogeneous)
    dense = op.dense()
    np.testing.assert_allclose(dense, dense.T)
    assert op.nu == pytest.approx(1.3)
    assert op.potential(1.0) == pytest.approx((1.3 + 0.5) ** 2)


@pytest.mark.parametrize("k,alpha,count", [(0, 0.0, 3), (0, 0.5, 2), (-1, 0.5, 2),
                                           (1, 0.25, 2)])
def test_homogeneous_field_levels(k, alpha, count):
    spectrum = extrapolated_eigenvalues(k, alpha, homogeneous, count=count)
    np.testing.assert_allclose(spectrum.values, oscillator_levels(k, alpha, 1.0, count),
                               atol=1e-3)


def test_landau_levels():
    assert oscillator_levels(0, 0.0, 1.0, 3) == [1.0, 3.0, 5.0]


@pytest.mark.parametrize("alpha,zero", [(0.0, 2.404825557695773), (0.5, math.pi)])
def test_free_disk_levels(alpha, zero):
    spectrum = extrapolated_eigenvalues(0, alpha, None, count=1)
    assert spectrum.values[0] == pytest.approx((zero / 20.0) ** 2, rel=1e-4)
    if alpha == 0.0:
        assert dirichlet_disk_level(20.0) == pytest.approx((zero / 20.0) ** 2, rel=1e-12)


def test_spectrum_error_estimates_are_small():
    spectrum = extrapolated_eigenvalues(0, 0.3, homogeneous, count=3)
    assert np.all(spectrum.errors < 1e-3)
    assert spectrum.raw.shape == (3, 3)
    assert np.all(np.diff(spectrum.values) > 0.0)


def test_eigenvalue_count_range():
    op = assemble_mode_operator(0, 0.5, homogeneous)
    with pytest.raises(ValidationError):
        eigenvalues(op, 0)
    with pytest.raises(ValidationError):
        eigenvalues(op, 11)


def test_eigenpairs_are_normalized():
    op = assemble_mode_operator(0, 0.4, homogeneous)
    values, vectors = eigenpairs(op, 2)
    g = vectors / op.nodes[:, None] ** op.nu
    np.testing.assert_allclose(np.sum(g ** 2 * op.weights[:, None], axis=0), 1.0, rtol=1e-10)
    assert np.all(g[0] > 0.0)
    np.testing.assert_allclose(values, eigenvalues(op, 2), rtol=1e-10)


def test_mode_profile_behaves_like_r_to_the_nu():
    op = assemble_mode_operator(0, 0.5, homogeneous)
    profile = mode_profile(op)
    f, df = profile(np.array([1e-4, 4e-4]))
    # f ~ c r^nu near the origin
    assert f[1] / f[0] == pytest.approx(2.0, rel=1e-3)
    assert df[0] * 1e-4 / f[0] == pytest.approx(0.5, rel=1e-3)


def test_alpha_must_be_below_one():
    with pytest.raises(ValidationError):
        assemble_mode_operator(0, 1.0)


def test_resolvent_of_an_eigenvector():
    op = assemble_mode_operator(0, 0.3)
    values, vectors = eigenpairs(op, 1)
    u = resolvent_apply(op, -1.0, vectors[:, 0])
    np.testing.assert_allclose(u, vectors[:, 0] / (values[0] + 1.0), atol=1e-8)
    assert not np.iscomplexobj(u)


def test_resolvent_complex_parameter():
    op = assemble_mode_operator(-1, 0.6, homogeneous)
    source = gaussian_source(op.nodes)
    u = resolvent_apply(op, 0.5 + 1.0j, source)
    assert np.iscomplexobj(u)
    g = u / op.nodes ** op.nu
    residual = op.apply(g) - (0.5 + 1.0j) * op.weights * g - op.weights * source / op.nodes ** op.nu
    assert np.max(np.abs(residual)) < 1e-8


@pytest.mark.parametrize("z", [0.0, 2.5])
def test_resolvent_rejects_the_spectrum_half_line(z):
    op = assemble_mode_operator(0, 0.3)
    with pytest.raises(ValidationError):
        resolvent_apply(op, z, gaussian_source(op.nodes))


def test_resolvent_rejects_wrong_shape():
    op = assemble_mode_operator(0, 0.3)
    with pytest.raises(ValidationError):
        resolvent_apply(op, -1.0, np.ones(3))


@pytest.mark.parametrize("k", [0, -1])
def test_resolvent_sweep_converges(k):
    study = resolvent_study(SWEEP, k=k, s_profile=homogeneous)
    assert study.strictly_decreasing
    assert study.reduction <= 0.25
    assert [row.alpha for row in study.rows] == list(SWEEP)


def test_singular_term_norm():
    assert singular_term_norm(damped_state(), 0.3) == pytest.approx(0.09 * math.pi / 2.0,
                                                                     rel=1e-8)
    assert singular_term_norm(gaussian_state(), 0.3) == math.inf


def test_sobolev_weight_norm_is_finite():
    value = sobolev_weight_norm(gaussian_state())
    assert 0.0 < value < math.inf
    assert sobolev_weight_norm(gaussian_state(), radius=0.5) < value
    with pytest.raises(ValidationError):
        sobolev_weight_norm(gaussian_state(), radius=0.0)


def test_singular_bound_decreases_with_flux():
    psi0 = gaussian_state()
    bounds = [singular_bound(psi0, alpha) for alpha in SWEEP]
    assert np.all(np.diff(bounds) < 0.0)


def test_gaussian_recovery_sequence():
    study = gamma_recovery_study(gaussian_state(), SWEEP)
    assert study.q0 == pytest.approx(math.pi, rel=1e-8)
    assert study.norm_squared == pytest.approx(math.pi, rel=1e-8)
    assert study.strictly_decreasing
    assert study.reduction <= 0.25
    for row in study.rows:
        assert row.singular_norm <= row.singular_bound
        assert row.lower_bound_ok
    assert np.all(np.diff([row.h1_gap for row in study.rows]) < 0.0)
    assert study.rows[0].as_dict()["alpha"] == SWEEP[0]


def test_recovery_study_with_capped_field():
    field = make_homogeneous_field(1.0, cap_radius=2.0)
    study = gamma_recovery_study(gaussian_state(), SWEEP[:3], field)
    assert study.strictly_decreasing
    assert all(row.lower_bound_ok for row in study.rows)


def test_recovery_study_needs_a_bounded_field():
    with pytest.raises(ValidationError):
        gamma_recovery_study(gaussian_state(), SWEEP, make_homogeneous_field(1.0))


def test_recovery_study_accepts_non_azimuthal_fields():
    study = gamma_recovery_study(gaussian_state(), SWEEP[:2], make_stream_field())
    assert len(study.rows) == 2
