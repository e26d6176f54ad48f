"""Tests for flux reduction, perturbation fields, cutoff and recovery profiles."""

import math
import os

import numpy as np
import pytest

from src.fields import (
    Cutoff,
    RecoveryProfile,
    a_alpha_eval,
    angular_average,
    divergence_check,
    lipschitz_check,
    load_tabulated_profile,
    make_azimuthal_field,
    make_constant_field,
    make_homogeneous_field,
    make_stream_field,
    make_tabulated_field,
    reduce_flux,
    zero_field,
)
from src.utils.errors import (
    NonAzimuthalFieldError,
    OriginSingularityError,
    ProfileError,
    TrivialFluxError,
    ValidationError,
)

PROFILE_TABLE = os.path.join(os.path.dirname(__file__), "data", "profiles", "saturating.csv")


@pytest.mark.parametrize("raw,alpha,ell,conjugated", [
    (2.7, 0.7, 1, False),
    (0.25, 0.25, 0, False),
    (-0.3, 0.3, 0, True),
    (1.4, 0.6, -1, True),
    (-5.5, 0.5, -3, False),
])
def test_reduce_flux(raw, alpha, ell, conjugated):
    flux = reduce_flux(raw)
    assert flux.alpha == pytest.approx(alpha, abs=1e-12)
    assert flux.ell == ell
    assert flux.conjugated is conjugated
    assert flux.raw == pytest.approx(raw, abs=1e-12)


@pytest.mark.parametrize("raw", [0.0, 1.0, 2.0, -3.0, float("inf")])
def test_reduce_flux_rejects_trivial(raw):
    with pytest.raises(TrivialFluxError):
        reduce_flux(raw)


def test_flux_payload():
    assert reduce_flux(2.7).as_dict() == {"alpha": pytest.approx(0.7), "ell": 1,
                                          "conjugated": False}


def test_a_alpha_is_azimuthal_with_modulus_alpha_over_r():
    x = np.array([1.0, 0.0, -2.0, 0.3])
    y = np.array([0.0, 0.5, 1.0, -0.4])
    ax, ay = a_alpha_eval(0.4, x, y)
    r = np.hypot(x, y)
    np.testing.assert_allclose(np.hypot(ax, ay), 0.4 / r, rtol=1e-14)
    np.testing.assert_allclose(ax * x + ay * y, 0.0, atol=1e-14)


def test_a_alpha_origin():
    with pytest.raises(OriginSingularityError):
        a_alpha_eval(0.5, np.array([0.0, 1.0]), np.array([0.0, 1.0]))


def test_cutoff_values_and_smoothness():
    cutoff = Cutoff(1.0, 2.0)
    value, first, second = cutoff.evaluate(np.array([0.5, 1.0, 1.5, 2.0, 2.5]))
    np.testing.assert_allclose(value, [1.0, 1.0, 0.5, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(first[[0, 1, 3, 4]], 0.0, atol=1e-15)
    np.testing.assert_allclose(second[[0, 1, 3, 4]], 0.0, atol=1e-15)
    assert first[2] == pytest.approx(-1.875)

    h = 1e-6
    r = np.array([1.2, 1.5, 1.8])
    v_plus, d_plus, _ = cutoff.evaluate(r + h)
    v_minus, d_minus, _ = cutoff.evaluate(r - h)
    _, d, d2 = cutoff.evaluate(r)
    np.testing.assert_allclose((v_plus - v_minus) / (2 * h), d, rtol=1e-6)
    np.testing.assert_allclose((d_plus - d_minus) / (2 * h), d2, rtol=1e-5, atol=1e-8)


def test_cutoff_laplacian():
    cutoff = Cutoff(1.0, 3.0)
    _, first, second = cutoff.evaluate(2.0)
    assert cutoff.laplacian(2.0) == pytest.approx(second + first / 2.0)
    assert cutoff.laplacian(0.5) == 0.0


@pytest.mark.parametrize("a,b", [(2.0, 1.0), (0.0, 1.0), (1.0, 1.0)])
def test_cutoff_validation(a, b):
    with pytest.raises(ValidationError):
        Cutoff(a, b)


@pytest.mark.parametrize("alpha", [0.2, 0.05, 0.0125])
def test_recovery_profile(alpha):
    eta = RecoveryProfile(alpha)
    root = math.sqrt(alpha)
    value, slope = eta.evaluate(np.array([0.5 * root, root, 1.5 * root, 3.0 * root]))
    np.testing.assert_allclose(value, [0.5 ** alpha, 1.0, 1.0, 1.0], rtol=1e-14)
    assert slope[0] == pytest.approx(alpha / root * 0.5 ** (alpha - 1.0))
    np.testing.assert_allclose(slope[2:], 0.0)
    assert eta.evaluate(0.0)[0] == 0.0
    assert eta.outer_radius == pytest.approx(2.0 * root)


def test_angular_average():
    assert angular_average(lambda r, t: np.exp(1j * t), 1.0) == pytest.approx(0.0, abs=1e-14)
    assert angular_average(lambda r, t: r * np.cos(t) ** 2, 2.0) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        angular_average(lambda r, t: t, 0.0)


@pytest.mark.parametrize("factory", [
    lambda: make_homogeneous_field(1.0),
    lambda: make_homogeneous_field(2.0, cap_radius=3.0),
    lambda: make_stream_field(),
    lambda: zero_field(),
])
def test_fields_are_divergence_free(factory):
    div, _ = divergence_check(factory())
    assert div < 1e-5


def test_homogeneous_field_lipschitz():
    field = make_homogeneous_field(3.0)
    assert lipschitz_check(field) == pytest.approx(1.5, rel=1e-12)
    assert field.lipschitz_bound == pytest.approx(1.5)
    assert not field.uniformly_bounded


def test_capped_field_is_bounded():
    field = make_homogeneous_field(1.0, cap_radius=2.0)
    assert field.uniformly_bounded
    profile = field.require_profile()
    r = np.linspace(0.0, 50.0, 501)
    assert np.max(profile(r)) < 1.0 * 1.5
    np.testing.assert_allclose(profile(r[r <= 2.0]), 0.5 * r[r <= 2.0])


def test_azimuthal_field_must_vanish_at_origin():
    with pytest.raises(ProfileError):
        make_azimuthal_field(lambda r: 1.0 + 0.0 * np.asarray(r))


def test_non_azimuthal_fields_have_no_profile():
    field = make_constant_field((0.2, -0.1))
    assert field.s_at_origin == (0.2, -0.1)
    with pytest.raises(NonAzimuthalFieldError):
        field.require_profile()
    s_r, s_t = field.polar(np.array([1.0]), np.array([0.3]), shifted=True)
    np.testing.assert_allclose([s_r[0], s_t[0]], 0.0, atol=1e-15)


def test_stream_field_shift_vanishes_at_origin():
    field = make_stream_field()
    assert field.s_at_origin != (0.0, 0.0)
    s_r, s_t = field.polar(np.array([1e-9]), np.array([0.7]), shifted=True)
    assert abs(s_r[0]) < 1e-6 and abs(s_t[0]) < 1e-6


def test_tabulated_profile(tmp_path):
    path = tmp_path / "profile.csv"
    r = np.linspace(0.0, 4.0, 41)
    np.savetxt(path, np.column_stack([r, 0.5 * r]), delimiter=",", header="r,s")
    profile = load_tabulated_profile(str(path))
    assert profile(1.23) == pytest.approx(0.615, rel=1e-10)
    assert profile(10.0) == pytest.approx(2.0)
    field = make_tabulated_field(str(path))
    assert field.uniformly_bounded
    assert field.name == "tabulated"


def test_tabulated_profile_rejects_short_tables(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("0,0\n1,0.5\n")
    with pytest.raises(ProfileError):
        load_tabulated_profile(str(path))


def test_shipped_profile_table():
    profile = load_tabulated_profile(PROFILE_TABLE)
    r = np.array([0.35, 1.0, 3.3, 7.5])
    np.testing.assert_allclose(profile(r), 0.5 * r / (1.0 + r * r / 16.0), rtol=1e-5)
    field = make_tabulated_field(PROFILE_TABLE)
    assert divergence_check(field)[0] < 1e-5
