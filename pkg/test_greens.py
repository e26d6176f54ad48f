"""Tests for the s- and p-wave Green functions."""

import math

import numpy as np
import pytest
from scipy import special

from src.greens import (
    GreenFunction,
    asymptotic_remainder_slope,
    cross_term_orthogonality,
    defect_residual,
    green_asymptotic,
    green_eval,
    green_norm_closed,
    green_norm_quadrature,
    green_radial,
)
from src.utils.errors import AsymptoticRangeError, OriginSingularityError, ValidationError

ALPHAS = [0.1, 0.25, 0.4, 0.5, 0.75, 0.9]
LAMBDAS = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("k", [0, -1])
@pytest.mark.parametrize("lam", LAMBDAS)
def test_norm_identity(alpha, k, lam):
    g = GreenFunction(k, alpha, lam)
    closed = green_norm_closed(g)
    assert green_norm_quadrature(g) == pytest.approx(closed, rel=1e-7)


def test_norm_reference_value():
    g = GreenFunction(-1, 0.3, 1.0)
    assert green_norm_closed(g) == pytest.approx(8.53966, abs=1e-5)


def test_norm_quadrature_rejects_tight_tolerance():
    with pytest.raises(ValidationError):
        green_norm_quadrature(GreenFunction(0, 0.5, 1.0), rel_tol=1e-12)


@pytest.mark.parametrize("k,alpha,lam", [(1, 0.5, 1.0), (0, 0.0, 1.0), (0, 1.0, 1.0),
                                         (-1, 0.5, 0.0)])
def test_invalid_green_function(k, alpha, lam):
    with pytest.raises(ValidationError):
        GreenFunction(k, alpha, lam)


def test_green_eval_carries_phase():
    g = GreenFunction(-1, 0.4, 1.5)
    value = green_eval(g, 0.7, math.pi / 2)
    expected = 1.5 ** g.nu * special.kv(g.nu, 1.05) * np.exp(-0.5j * math.pi)
    assert value == pytest.approx(expected, rel=1e-10)
    assert isinstance(value, complex)


def test_green_eval_origin():
    g = GreenFunction(0, 0.4, 1.0)
    with pytest.raises(OriginSingularityError):
        green_eval(g, 0.0, 0.0)
    with pytest.raises(OriginSingularityError):
        green_radial(g, np.array([1.0, -1.0]))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("k", [0, -1])
def test_asymptotic_remainder_slope(alpha, k):
    g = GreenFunction(k, alpha, 1.0)
    slope = asymptotic_remainder_slope(g, np.geomspace(1e-4, 1e-2, 9))
    assert slope == pytest.approx(2.0 - g.nu, abs=0.05)


def test_asymptotic_range():
    g = GreenFunction(0, 0.5, 2.0)
    with pytest.raises(AsymptoticRangeError):
        green_asymptotic(g, 0.6)
    assert green_asymptotic(g, 1e-3) == pytest.approx(g.radial(1e-3), rel=1e-3)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("k", [0, -1])
@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
def test_defect_equation(alpha, k, lam):
    g = GreenFunction(k, alpha, lam)
    radii = np.geomspace(0.01, 5.0, 40)
    assert np.max(defect_residual(g, radii)) <= 1e-7


def test_shifted_defect_equation_fails():
    g = GreenFunction(0, 0.5, 1.0)
    radii = np.geomspace(0.01, 5.0, 40)
    assert np.max(defect_residual(g, radii, shift=0.1)) > 1e-2


def test_radial_derivatives_match_scipy():
    g = GreenFunction(0, 0.35, 2.0)
    r = np.array([0.05, 0.5, 1.5])
    f, df, d2f = green_radial(g, r)
    scale = 2.0 ** g.nu
    np.testing.assert_allclose(f, scale * special.kv(g.nu, 2.0 * r), rtol=1e-10)
    np.testing.assert_allclose(df, scale * 2.0 * special.kvp(g.nu, 2.0 * r, 1), rtol=1e-9)
    np.testing.assert_allclose(d2f, scale * 4.0 * special.kvp(g.nu, 2.0 * r, 2), rtol=1e-9)


@pytest.mark.parametrize("alpha", [0.3, 0.6])
def test_channels_are_orthogonal(alpha):
    assert cross_term_orthogonality(alpha, 1.0, lambda r: np.exp(-r)) <= 1e-10
