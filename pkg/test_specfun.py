"""Tests for the Gamma and Bessel-K implementations against SciPy and closed forms."""

import math

import numpy as np
import pytest
from scipy import special
from scipy.integrate import quad

from src.specfun import (
    bessel_k,
    bessel_k_derivative,
    bessel_k_integral,
    bessel_k_second_derivative,
    bessel_k_series,
    gamma_fn,
    log_gamma,
)
from src.utils.errors import DomainError, PoleError


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 0.8, 1.0, 1.5, 2.5, 4.0, 7.3, -0.5, -1.3, -2.7])
def test_gamma_matches_scipy(x):
    assert gamma_fn(x) == pytest.approx(special.gamma(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 0.8])
def test_gamma_reflection(x):
    product = gamma_fn(x) * gamma_fn(1.0 - x) * math.sin(math.pi * x)
    assert product == pytest.approx(math.pi, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma_fn(x)


@pytest.mark.parametrize("x", [0.05, 0.5, 3.0, 20.0])
def test_log_gamma(x):
    assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-12, abs=1e-14)


def test_bessel_random_points_match_scipy():
    rng = np.random.default_rng(0)
    nus = rng.uniform(0.05, 0.95, 500)
    xs = rng.uniform(0.01, 20.0, 500)
    errors = [abs(bessel_k(nu, x) / special.kv(nu, x) - 1.0) for nu, x in zip(nus, xs)]
    assert max(errors) < 1e-10


@pytest.mark.parametrize("nu,x", [(0.3, 0.5), (0.7, 1.7), (0.5, 3.0), (0.9, 6.0)])
def test_bessel_matches_integral_representation(nu, x):
    value, _ = quad(lambda t: math.exp(-x * math.cosh(t)) * math.cosh(nu * t), 0.0, 30.0,
                    epsabs=0.0, epsrel=1e-13, limit=200)
    assert bessel_k(nu, x) == pytest.approx(value, rel=1e-10)


@pytest.mark.parametrize("x", [0.01, 0.3, 1.3, 5.0, 15.0])
def test_bessel_half_order_closed_form(x):
    expected = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
    assert bessel_k(0.5, x) == pytest.approx(expected, rel=1e-12)


def test_bessel_accepts_arrays():
    x = np.array([0.5, 1.5, 2.5, 8.0])
    values = bessel_k(0.4, x)
    assert values.shape == x.shape
    np.testing.assert_allclose(values, special.kv(0.4, x), rtol=1e-10)


@pytest.mark.parametrize("nu", [0.2, 0.5, 0.8])
def test_routes_agree_at_crossover(nu):
    x = np.linspace(1.5, 2.5, 11)
    np.testing.assert_allclose(bessel_k_series(nu, x), bessel_k_integral(nu, x), rtol=1e-10)


@pytest.mark.parametrize("nu", [1.2, 1.5, 1.8])
def test_orders_above_one(nu):
    x = np.array([0.2, 1.0, 3.0, 9.0])
    np.testing.assert_allclose(bessel_k(nu, x), special.kv(nu, x), rtol=1e-10)


@pytest.mark.parametrize("nu", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("x", [0.05, 1.0, 5.0, 15.0])
def test_bessel_is_log_convex_in_order(nu, x):
    # K_{nu-1} = K_{1-nu}
    assert bessel_k(nu + 1.0, x) * bessel_k(1.0 - nu, x) > bessel_k(nu, x) ** 2


@pytest.mark.parametrize("nu", [0.1, 0.45, 0.7, 0.95])
def test_derivatives(nu):
    x = np.array([0.05, 0.4, 1.9, 2.1, 6.0])
    np.testing.assert_allclose(bessel_k_derivative(nu, x), special.kvp(nu, x, 1), rtol=1e-9)
    np.testing.assert_allclose(bessel_k_second_derivative(nu, x), special.kvp(nu, x, 2),
                               rtol=1e-9)


@pytest.mark.parametrize("nu", [0.6, 0.75, 0.9])
def test_small_argument_law(nu):
    x = 1e-6
    leading = special.gamma(nu) * 2.0 ** (nu - 1.0) * x ** (-nu)
    assert bessel_k(nu, x) == pytest.approx(leading, rel=1e-4)


@pytest.mark.parametrize("nu,x", [(0.0, 1.0), (2.0, 1.0), (-0.3, 1.0), (0.5, 0.0), (0.5, -1.0)])
def test_bessel_domain(nu, x):
    with pytest.raises(DomainError):
        bessel_k(nu, x)


def test_bessel_rejects_any_nonpositive_entry():
    with pytest.raises(DomainError):
        bessel_k(0.5, np.array([1.0, 0.0, 2.0]))
