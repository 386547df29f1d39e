import numpy as np
import pytest

from conftest import random_laurent
from selfx import DomainError, LaurentPolynomial, RangeError, SingularSystem
from selfx.pairing import (
    BivariatePolynomial,
    build_g,
    build_g_star,
    resultant_degree_bound,
    resultant_in_z,
    sylvester_determinant,
    sylvester_matrix,
    verify_identity,
)

L = LaurentPolynomial.from_dict


def test_g_of_triple_example(triple):
    g = build_g(triple)
    # 2t z^3 - 1 in the monomial basis
    expected = np.zeros((2, 4))
    expected[0, 0], expected[1, 3] = -1, 2
    assert np.allclose(g.coeffs, expected)


def test_g_of_quine_cubic():
    eps = 0.05
    g = build_g(L({3: 1, 1: eps}))
    expected = np.zeros((3, 3))
    expected[0, 0] = eps
    expected[0, 2], expected[2, 2] = -1, 4
    assert np.allclose(g.coeffs, expected)


def test_g_star_of_triple_example(triple):
    # conj-symmetric partner: z^3 g(t, 1/z) for real coefficients = 2t - z^3
    expected = np.zeros((2, 4))
    expected[1, 0], expected[0, 3] = 2, -1
    assert np.allclose(build_g_star(triple).coeffs, expected)


def test_g_star_total_degree():
    assert build_g_star(L({3: 1, -2: 0.1})).total_degree == 6


def test_g_star_real_coefficients_reflection():
    rng = np.random.default_rng(5)
    p = L({3: 0.7, 2: -0.2, -1: 0.4, -2: 1.1})
    g, gs = build_g(p), build_g_star(p)
    t = rng.uniform(-2, 2, 100)
    z = rng.normal(size=100) + 1j * rng.normal(size=100)
    assert np.allclose(gs(t, z), z ** (p.n - p.m) * g(t, 1 / z), rtol=1e-10, atol=1e-10)


def test_defining_identity_random():
    rng = np.random.default_rng(6)
    for _ in range(20):
        p = random_laurent(rng)
        theta = rng.uniform(0.1, np.pi - 0.1, 50)
        z = np.exp(2j * np.pi * rng.uniform(size=50))
        g = build_g(p)
        lhs = g(np.cos(theta), z) * z ** p.m * (np.exp(1j * theta) - np.exp(-1j * theta)) + p(np.exp(-1j * theta) * z)
        assert np.allclose(lhs, p(np.exp(1j * theta) * z), rtol=0, atol=1e-10)


def test_verify_identity_examples(triple):
    assert verify_identity(triple, np.pi / 2, 1.0) < 1e-12
    with pytest.raises(DomainError):
        verify_identity(triple, 0.0, 1.0)


def test_pairing_needs_normalized_input():
    with pytest.raises(RangeError):
        build_g(L({1: 1, -3: 1}))
    with pytest.raises(RangeError):
        build_g(L({2: 1, 0: 1, -1: 1}))


def test_sylvester_matrix_size_and_determinant():
    # Res(z - 2, z - 3) = 2 - 3 up to sign convention of descending rows: det [[1,-2],[1,-3]] = -1
    S = sylvester_matrix(np.array([-2.0, 1.0]), np.array([-3.0, 1.0]))
    assert S.shape == (2, 2)
    assert np.isclose(np.linalg.det(S), -1.0)


def test_sylvester_size_matches_exponent_span(quine3):
    g, gs = build_g(quine3), build_g_star(quine3)
    S = sylvester_matrix(g.z_coefficients(0.3), gs.z_coefficients(0.3))
    assert S.shape == (2 * (quine3.n - quine3.m),) * 2


@pytest.mark.parametrize("terms, degree", [({2: 1, -1: 1}, 6), ({3: 1, 1: 0.05}, 8)])
def test_resultant_degree_examples(terms, degree):
    p = L(terms)
    assert resultant_in_z(build_g(p), build_g_star(p)).degree == degree


def test_power_substitution_resultant_is_not_identically_zero():
    # the pairing system of z^4 + z^-2 has a nonzero resultant of full degree;
    # the infinite family shows up as a continuum of real roots, not as R = 0
    p = L({4: 1, -2: 1})
    R = resultant_in_z(build_g(p), build_g_star(p))
    assert R.degree == resultant_degree_bound(4, -2)


def test_shared_factor_is_singular():
    # g = g* = z - t
    g = BivariatePolynomial([[0, 1], [-0.5, 0]])
    with pytest.raises(SingularSystem):
        resultant_in_z(g, g)


def test_interpolant_matches_direct_determinant():
    rng = np.random.default_rng(8)
    for _ in range(5):
        p = random_laurent(rng, 2, 4)
        g, gs = build_g(p), build_g_star(p)
        R = resultant_in_z(g, gs)
        t0 = rng.uniform(-1, 1, 20)
        direct = sylvester_determinant(g, gs, t0)
        assert np.max(np.abs(R(t0) - direct)) < 1e-7 * np.max(np.abs(direct))


def test_roots_come_in_conjugate_pairs():
    rng = np.random.default_rng(9)
    p = random_laurent(rng, 3, 3)
    R = resultant_in_z(build_g(p), build_g_star(p))
    phase = np.exp(-1j * np.angle(R.scaled[R.degree]))
    roots = np.roots((R.scaled[: R.degree + 1] * phase)[::-1])
    for r in roots:
        assert np.min(np.abs(roots - np.conj(r))) < 1e-6 * (1 + abs(r))
