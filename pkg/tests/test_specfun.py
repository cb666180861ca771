import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from losmimo.errors import DomainError
from losmimo.specfun import bessel_j0, gauss_q


def _j0_ref(x):
    with mpmath.workdps(40):
        return float(mpmath.besselj(0, x))


def _q_ref(x):
    val, _ = integrate.quad(lambda t: math.exp(-t * t / 2), x, math.inf, epsabs=1e-15, epsrel=1e-13)
    return val / math.sqrt(2 * math.pi)


def test_j0_at_zero_is_one():
    assert bessel_j0(0.0) == 1.0


def test_j0_first_zero():
    assert abs(bessel_j0(2.404825557695773)) < 1e-10


def test_j0_at_pi():
    assert bessel_j0(math.pi) == pytest.approx(_j0_ref(math.pi), abs=1e-12)
    assert bessel_j0(math.pi) == pytest.approx(-0.304242, abs=1e-6)


@pytest.mark.parametrize("x", [7.999, 8.0, 8.001, 24.999, 25.0, 25.001, 100.0, 499.9])
def test_j0_across_algorithm_boundaries(x):
    assert abs(bessel_j0(x) - _j0_ref(x)) < 1e-12


def test_j0_vectorized_matches_scalar():
    xs = np.linspace(-60, 60, 97)
    vec = bessel_j0(xs)
    assert vec.shape == xs.shape
    assert np.array_equal(vec, np.array([bessel_j0(x) for x in xs]))


@given(st.floats(-500, 500, allow_nan=False))
@settings(max_examples=200, deadline=None)
def test_j0_even_and_bounded(x):
    assert bessel_j0(x) == bessel_j0(-x)
    assert abs(bessel_j0(x)) <= 1.0 + 1e-15


@given(st.floats(-500, 500, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_j0_against_mpmath(x):
    assert abs(bessel_j0(x) - _j0_ref(x)) < 1e-12


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_input_rejected(bad):
    with pytest.raises(DomainError):
        bessel_j0(bad)
    with pytest.raises(DomainError):
        gauss_q(bad)


def test_q_known_values():
    assert gauss_q(0.0) == 0.5
    assert gauss_q(1.0) == pytest.approx(_q_ref(1.0), rel=1e-10)
    assert gauss_q(1.0) == pytest.approx(0.158655, abs=1e-6)
    assert gauss_q(-3.0) == pytest.approx(1 - _q_ref(3.0), rel=1e-10)
    assert gauss_q(-3.0) == pytest.approx(0.998650, abs=1e-6)


@given(st.floats(-8, 8, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_q_symmetry_and_quadrature(x):
    assert gauss_q(x) + gauss_q(-x) == pytest.approx(1.0, abs=1e-15)
    assert gauss_q(x) == pytest.approx(_q_ref(x), rel=1e-10)


def test_q_monotone_decreasing():
    q = gauss_q(np.linspace(-8, 8, 1001))
    assert np.all(np.diff(q) <= 0)  # flat only where Q rounds to 1 near x = -8
    assert np.all(np.diff(gauss_q(np.linspace(-5, 8, 1001))) < 0)
