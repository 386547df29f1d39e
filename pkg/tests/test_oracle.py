import numpy as np
import pytest

from conftest import random_laurent
from selfx import LaurentPolynomial, OracleConfig, SaturationWarning, compare, extremal, oracle_self_intersections
from selfx.intersector import self_intersections
from selfx.oracle import match_pairs, pair_distance

L = LaurentPolynomial.from_dict


def test_triple_example_pairs(triple):
    pairs = oracle_self_intersections(triple)
    pi = np.pi
    expected = [(pi / 3, pi), (pi, 5 * pi / 3), (pi / 3, 5 * pi / 3)]
    assert len(pairs) == 3
    for a, b in expected:
        assert min(abs(s.alpha - a) + abs(s.beta - b) for s in pairs) < 1e-8


def test_balanced_saturates():
    with pytest.raises(SaturationWarning):
        oracle_self_intersections(L({1: 1, -1: np.exp(0.9j)}))


def test_identity_has_no_pairs():
    assert oracle_self_intersections(L({1: 1})) == []


def test_compare_examples(triple, quine3):
    eq = compare(quine3)
    assert eq.pipeline_count == eq.oracle_count == 4 and eq.max_pair_distance < 1e-6
    assert compare(extremal(3, -2, 1e-3)).oracle_count == 10
    assert compare(triple).counts_agree


def test_grid_size_stability():
    rng = np.random.default_rng(21)
    for _ in range(8):
        p = random_laurent(rng, 2, 5)
        a = oracle_self_intersections(p, OracleConfig(grid_size=4096))
        b = oracle_self_intersections(p, OracleConfig(grid_size=8192))
        assert len(a) == len(b)


def test_newton_derivative_against_finite_differences():
    rng = np.random.default_rng(22)
    p = random_laurent(rng, 3, 5)
    dp = p.derivative()
    theta = rng.uniform(0, 2 * np.pi, 100)
    h = 1e-5
    fd = (p.on_circle(theta + h) - p.on_circle(theta - h)) / (2 * h)
    # d/dtheta p(e^{i theta}) = i e^{i theta} p'(e^{i theta})
    exact = 1j * np.exp(1j * theta) * dp.on_circle(theta)
    assert np.max(np.abs(fd - exact)) < 1e-6 * (1 + np.max(np.abs(exact)))


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(grid_size=10)


def test_pair_distance_is_symmetric_under_swap(triple):
    s = self_intersections(triple).intersections
    assert pair_distance(s[0], s[0]) == 0
    matches, worst = match_pairs(s, list(reversed(s)))
    assert len(matches) == 3 and worst < 1e-12
