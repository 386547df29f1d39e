import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfx.chebyshev import u_coeffs, u_eval, u_table


def test_u_eval_examples():
    assert u_eval(1, 0.5) == 1.0
    assert u_eval(-1, 0.37) == 0
    assert u_eval(-3, 0.25) == -0.5


def test_u_coeffs_examples():
    assert u_coeffs(2).coeffs.tolist() == [-1.0, 0.0, 4.0]
    assert u_coeffs(0).coeffs.tolist() == [1.0]
    assert np.array_equal(u_coeffs(-4).coeffs, -u_coeffs(2).coeffs)
    assert u_coeffs(-1).degree == -1


@pytest.mark.parametrize("k", range(-12, 13))
def test_sine_ratio_identity(k):
    theta = np.random.default_rng(k + 100).uniform(0, np.pi, 200)
    exact = np.sin((k + 1) * theta) / np.sin(theta)
    assert np.max(np.abs(u_eval(k, np.cos(theta)) - exact)) < 1e-10


@given(st.integers(-12, 12), st.floats(-1, 1))
def test_coefficients_match_recurrence(k, t):
    assert abs(u_coeffs(k)(t) - u_eval(k, t)) < 1e-10


def test_endpoints_are_finite():
    # U_k(1) = k + 1, U_k(-1) = (-1)^k (k + 1)
    for k in range(8):
        assert u_eval(k, 1.0) == k + 1
        assert u_eval(k, -1.0) == (-1) ** k * (k + 1)


def test_table_rows():
    t = np.linspace(-1, 1, 7)
    tab = u_table(5, t)
    assert tab.shape == (7, 7)
    for j in range(7):
        assert np.allclose(tab[j], u_eval(j - 1, t))


def test_complex_argument():
    t = 0.3 + 0.4j
    assert np.isclose(u_eval(3, t), 8 * t**3 - 4 * t)
