import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlcert.trigpoly import (
    CaseId,
    TrigPoly,
    build_G,
    coeff_norm,
    differentiate,
    evaluate,
    mean_value,
    multiply,
    power,
    sine_to_upoly,
    to_upoly,
)

PI = math.pi


def test_build_G_coefficients():
    assert build_G(CaseId(1, 1)).cos_coeffs == (3, 2, 2, 2)
    assert build_G(CaseId(2, -1)).cos_coeffs == (3, 2, 0, -2, -2)
    assert build_G(CaseId(0, 1)).cos_coeffs == (3, 4, 2)


def test_case_validation():
    with pytest.raises(ValueError):
        CaseId(-1, 1)
    with pytest.raises(ValueError):
        CaseId(1, 0)


def test_derivatives_match_published_forms():
    g1 = differentiate(build_G(CaseId(1, 1)), 1)
    assert g1.pi_power == 1 and g1.sin_coeffs == (-4, -8, -12) and not g1.cos_coeffs
    g2 = differentiate(build_G(CaseId(2, -1)), 2)
    assert g2.pi_power == 2 and g2.cos_coeffs == (0, -8, 0, 72, 128)
    G = build_G(CaseId(2, 1))
    assert differentiate(G, 0) == G


def test_eval_special_points():
    assert evaluate(build_G(CaseId(1, 1)), 0.0) == pytest.approx(9)
    assert evaluate(build_G(CaseId(1, -1)), 0.0) == pytest.approx(1)
    assert evaluate(build_G(CaseId(1, 1)), 0.5) == pytest.approx(1)


def test_upoly_forms():
    assert to_upoly(build_G(CaseId(1, 1))).coeffs == (1, -4, 4, 8)
    assert to_upoly(build_G(CaseId(2, -1))).coeffs == (1, 8, 16, -8, -16)
    assert to_upoly(TrigPoly((3,))).coeffs == (3,)
    assert to_upoly(build_G(CaseId(1, -1))).coeffs == (5, 8, -4, -8)
    assert to_upoly(build_G(CaseId(2, 1))).coeffs == (5, -4, -16, 8, 16)


def test_to_upoly_rejects_sine_part():
    with pytest.raises(ValueError):
        to_upoly(differentiate(build_G(CaseId(1, 1)), 1))


def test_sine_reduction_of_G_prime():
    g1 = differentiate(build_G(CaseId(1, 1)), 1)
    V = sine_to_upoly(g1)
    x = np.linspace(0, 1, 97)
    assert np.allclose(np.sin(2 * PI * x) * V(np.cos(2 * PI * x)), evaluate(g1, x), atol=1e-10)


def test_parseval_means():
    for k in (1, 2):
        for s in (1, -1):
            G = build_G(CaseId(k, s))
            assert mean_value(G) == 3
            assert mean_value(power(G, 2)) == 15
    for s in (1, -1):
        assert mean_value(power(build_G(CaseId(2, s)), 3)) == 93


def test_coeff_norms():
    assert coeff_norm(build_G(CaseId(1, 1))) == 9
    assert coeff_norm(differentiate(build_G(CaseId(2, 1)), 2)) == pytest.approx(208 * PI**2)
    assert coeff_norm(TrigPoly()) == 0


@pytest.mark.parametrize("k", range(9))
def test_chebyshev_matches_direct_evaluation(k):
    x = np.random.default_rng(k).uniform(0, 1, 64)
    for s in (1, -1):
        G = build_G(CaseId(k, s))
        direct = evaluate(G, x)
        via_u = to_upoly(G)(np.cos(2 * PI * x))
        assert np.all(np.abs(via_u - direct) <= 1e-12 * (1 + np.abs(direct)))
        assert np.all(direct >= -1e-12)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_derivative_finite_difference(k):
    G = build_G(CaseId(k, 1))
    x = np.random.default_rng(7).uniform(0, 1, 32)
    h = 1e-5
    for order in (1, 2):
        base = differentiate(G, order - 1)
        fd = (evaluate(base, x + h) - evaluate(base, x - h)) / (2 * h)
        exact = evaluate(differentiate(G, order), x)
        assert np.allclose(fd, exact, rtol=1e-6, atol=1e-6 * np.max(np.abs(exact)))


@pytest.mark.parametrize("k", range(1, 5))
def test_parseval_equality_of_signs(k):
    for m in range(1, min(3, k + 1) + 1):
        assert mean_value(power(build_G(CaseId(k, 1)), m)) == mean_value(power(build_G(CaseId(k, -1)), m))


small = st.lists(st.integers(-5, 5), min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(small, small)
def test_multiply_commutes(a, b):
    p, q = TrigPoly(tuple(a)), TrigPoly(tuple(b))
    assert multiply(p, q) == multiply(q, p)


@settings(max_examples=60, deadline=None)
@given(small)
def test_mean_of_square(a):
    p = TrigPoly(tuple(a))
    expected = sum(Fraction(c) ** 2 * (1 if m == 0 else Fraction(1, 2)) for m, c in enumerate(a))
    assert mean_value(multiply(p, p)) == expected


@settings(max_examples=30, deadline=None)
@given(small, small, st.floats(0, 1))
def test_multiply_pointwise(a, b, x):
    p, q = TrigPoly(tuple(a)), TrigPoly(tuple(b))
    assert evaluate(multiply(p, q), x) == pytest.approx(evaluate(p, x) * evaluate(q, x), abs=1e-9)
