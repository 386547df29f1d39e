import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfx import DegenerateInput, DomainError, InsufficientSamples, LaurentPolynomial
from selfx.errors import BalancedModulusError
from selfx.laurent import (
    detect_exceptional,
    evaluate,
    fit_from_samples,
    fourier_coefficients,
    normalize,
    psi,
    reduce_balanced,
    sample,
    support_gcd,
)

L = LaurentPolynomial.from_dict


def test_evaluate_triple_point_preimages(triple):
    assert abs(evaluate(triple, -1)) < 1e-15
    assert abs(evaluate(triple, np.exp(1j * np.pi / 3))) < 1e-15


def test_evaluate_identity():
    assert evaluate(L({1: 1}), 1j) == 1j


def test_evaluate_rejects_zero():
    with pytest.raises(DomainError):
        evaluate(L({-1: 1}), 0)


def test_trimming_and_zero_polynomial():
    p = LaurentPolynomial([0, 0, 1, 2, 0], -2)
    assert (p.m, p.n) == (0, 1)
    z = LaurentPolynomial([0, 0], 3)
    assert z.is_zero() and (z.m, z.n) == (0, 0)


def test_normalize_flips_when_negative_side_dominates():
    q, log = normalize(L({-3: 1, 1: 1}))
    assert q == L({3: 1, -1: 1})
    assert log.conjugate_flipped


def test_normalize_drops_constant(triple):
    q, log = normalize(L({0: 5, 2: 1, -1: 1}))
    assert q == triple
    assert log.constant_dropped == 5 and not log.conjugate_flipped


def test_normalize_constant_is_degenerate():
    with pytest.raises(DegenerateInput):
        normalize(L({0: 7}))


@given(st.lists(st.tuples(st.integers(-6, 6), st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                                  allow_infinity=False)), min_size=1, max_size=6))
def test_normalize_round_trip(terms):
    p = L(dict(terms))
    if p.is_constant():
        return
    q, log = normalize(p)
    back = log.invert(q)
    assert back.as_dict() == p.as_dict()


@pytest.mark.parametrize("terms, expected", [({2: 1, -1: 1}, 1), ({4: 1, -2: 1}, 2), ({6: 1, 3: 1}, 3)])
def test_support_gcd(terms, expected):
    assert support_gcd(L(terms)) == expected


@given(st.integers(1, 4), st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=4, unique=True))
def test_support_gcd_scales_under_power_substitution(j, exps):
    p = L({k: 1 + abs(k) for k in exps})
    assert support_gcd(p.substitute_power(j)) == j * support_gcd(p)


def test_detect_exceptional_cases():
    assert str(detect_exceptional(L({4: 1, -2: 1}))) == "PowerSubstitution(2)"
    assert str(detect_exceptional(L({1: 1, -1: np.exp(1j * np.pi / 4)}))) == "BalancedModulus"
    assert not detect_exceptional(L({3: 1, 1: 0.1})).is_exceptional


def test_reduce_balanced_simple():
    r = reduce_balanced(L({1: 1, -1: 0.5}))
    assert r.support() == [1]
    assert abs(r[1] - 0.75) < 1e-15


def test_reduce_balanced_matches_psi_on_circle():
    p = L({2: 1, -2: 0.25, 1: 1})
    r = reduce_balanced(p)
    c = -0.25
    theta = 2 * np.pi * np.arange(64) / 64
    assert r[-2] == 0
    assert np.max(np.abs(r.on_circle(theta) - psi(p.on_circle(theta), c))) < 1e-12


def test_reduce_balanced_without_negative_extreme():
    p = L({2: 1, 1: 0.3, -1: 0.2})
    assert reduce_balanced(p) is p
    with pytest.raises(DomainError):
        reduce_balanced(L({1: 1, -3: 1}))


def test_reduce_balanced_singular():
    with pytest.raises(BalancedModulusError):
        reduce_balanced(L({1: 1, -1: 1j}))


def test_reduce_balanced_is_psi_for_random_inputs():
    from conftest import random_laurent

    rng = np.random.default_rng(3)
    z = np.exp(2j * np.pi * rng.uniform(size=50))
    for _ in range(20):
        p = random_laurent(rng, 1, 5, balanced=True)
        c = -p[p.m] / np.conj(p[p.n])
        assert np.max(np.abs(reduce_balanced(p)(z) - psi(p(z), c))) < 1e-10


def test_fit_from_samples_exact(triple):
    theta, values = sample(triple, 64)
    fit = fit_from_samples(theta, values, -1, 2)
    assert abs(fit[2] - 1) < 1e-12 and abs(fit[-1] - 1) < 1e-12
    assert abs(fit[0]) < 1e-12 and abs(fit[1]) < 1e-12


def test_fit_square_wave_against_integrals():
    N = 4096
    theta = 2 * np.pi * (np.arange(N) + 0.5) / N
    values = np.sign(np.cos(theta)).astype(complex)
    got = fit_from_samples(theta, values, -5, 5)
    # hat f(k) = 2 sin(k pi / 2) / (k pi) for k != 0, 0 for k = 0
    for k in range(-5, 6):
        exact = 0.0 if k == 0 else 2 * np.sin(k * np.pi / 2) / (k * np.pi)
        assert abs(got[k] - exact) < 2e-3


def test_fit_needs_enough_samples():
    with pytest.raises(InsufficientSamples):
        fit_from_samples([0, 1, 2], [0, 1, 2], -2, 2)


def test_fourier_coefficients_examples(triple):
    theta = 2 * np.pi * np.arange(256) / 256
    c = fourier_coefficients(theta, np.exp(1j * theta), (-3, 3))
    assert np.allclose(c, [0, 0, 0, 0, 1, 0, 0], atol=1e-14)
    th, vals = sample(triple, 256)
    c = fourier_coefficients(th, vals, (-1, 2))
    assert np.allclose(c, [1, 0, 0, 1], atol=1e-14)
    c0 = fourier_coefficients(theta, np.abs(np.cos(theta)), (0, 0))[0]
    assert abs(c0 - 2 / np.pi) < 1e-4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fit_inverts_sample(seed):
    from conftest import random_laurent

    p = random_laurent(np.random.default_rng(seed), 1, 6)
    theta, values = sample(p, 64)
    fit = fit_from_samples(theta, values, p.m, p.n)
    assert np.max(np.abs(fit.coeffs - p.coeffs)) < 1e-10


def test_json_round_trip(triple):
    assert LaurentPolynomial.loads(triple.dumps()) == triple
