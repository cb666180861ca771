import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from losmimo.errors import ArgumentError
from losmimo.spectrum_tools import char_poly_from_traces, power_sums, real_roots, traces_of


def _det_cofactor(m):
    # Laplace expansion along the first row; independent of numpy.linalg
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det_cofactor([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def _char_poly_by_interpolation(a):
    # det(A - lambda I) sampled at n + 1 points pins the degree-n polynomial
    n = a.shape[0]
    xs = np.arange(n + 1, dtype=float)
    ys = [_det_cofactor((a - x * np.eye(n)).tolist()).real for x in xs]
    return np.polyfit(xs, ys, n)


def test_identity_three():
    np.testing.assert_array_equal(char_poly_from_traces([3, 3, 3]), [-1, 3, -3, 1])


def test_diag_one_two():
    np.testing.assert_array_equal(char_poly_from_traces([3, 5]), [1, -3, 2])


def test_empty_traces():
    with pytest.raises(ArgumentError):
        char_poly_from_traces([])


def test_random_hermitian_against_determinant():
    g = np.random.default_rng(5)
    b = g.standard_normal((4, 4)) + 1j * g.standard_normal((4, 4))
    a = (b + b.conj().T) / 2
    ours = char_poly_from_traces(traces_of(a))
    ref = _char_poly_by_interpolation(a)
    np.testing.assert_allclose(ours, ref, rtol=1e-9, atol=1e-9 * np.abs(ref).max())


def test_power_sums_examples():
    np.testing.assert_allclose(power_sums([1, 0, 0], 3), [1, 1, 1])
    np.testing.assert_allclose(power_sums([0.5, 0.5], 2), [1.0, 0.5])
    with pytest.raises(ArgumentError):
        power_sums([1.0], 0)


@given(st.integers(1, 8), st.integers(0, 2**32))
@settings(max_examples=80, deadline=None)
def test_round_trip(n, seed):
    g = np.random.default_rng(seed)
    b = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    a = b @ b.conj().T / n
    t = traces_of(a)
    lam = np.linalg.eigvalsh(a)
    np.testing.assert_allclose(t, power_sums(lam, n), rtol=1e-9)
    c = char_poly_from_traces(t)
    assert -c[1] / c[0] == pytest.approx(t[0], rel=1e-12)
    np.testing.assert_allclose(real_roots(c, 0.0, t[0] + 1), lam, atol=1e-6)


def test_repeated_roots():
    c = char_poly_from_traces(power_sums([0.5, 0.5, 0.0], 3))
    np.testing.assert_allclose(real_roots(c, 0.0, 2.0), [0.0, 0.5, 0.5], atol=1e-6)


def test_newton_girard_matches_vieta():
    for roots in itertools.product([0.0, 0.25, 1.0, 2.0], repeat=3):
        c = char_poly_from_traces(power_sums(roots, 3))
        np.testing.assert_allclose(c, -np.poly(roots), atol=1e-12)
