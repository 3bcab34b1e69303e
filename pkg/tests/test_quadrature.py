import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlcert.kernels import KernelSpec, lemma_route_bound
from hlcert.quadrature import error_bound, midpoint_nodes, midpoint_sum, pairwise_sum, plan_steps
from hlcert.trigpoly import CaseId, build_G, evaluate

REF_N = 1 << 20


def test_constant_and_cosine():
    assert midpoint_sum(lambda x: np.full_like(x, 3.0), 7) == pytest.approx(1.5)
    assert abs(midpoint_sum(lambda x: np.cos(4 * np.pi * x), 4)) < 1e-15


def test_G_plus_midpoint_is_half_mean():
    G = build_G(CaseId(1, 1))
    assert midpoint_sum(lambda x: evaluate(G, x), 8) == pytest.approx(1.5, abs=1e-15)


@pytest.mark.parametrize("N", [1, 3, 8, 17])
def test_exactness_ladder(N):
    for m in range(1, 2 * N):
        assert abs(midpoint_sum(lambda x: np.cos(2 * np.pi * m * x), N)) <= 1e-13


def test_nodes():
    assert np.allclose(midpoint_nodes(2), [0.125, 0.375])
    with pytest.raises(ValueError):
        midpoint_nodes(0)


def test_pairwise_sum_is_order_fixed():
    v = np.random.default_rng(0).normal(size=1001)
    assert pairwise_sum(v) == pairwise_sum(v.copy())
    assert pairwise_sum(v) == pytest.approx(math.fsum(v), abs=1e-12)
    assert pairwise_sum([]) == 0.0


def test_published_error_bounds():
    assert 0.0443 <= error_bound(4900, None, 24) < 0.045
    assert error_bound(99800, None, 175) < 0.017
    assert error_bound(260000, None, 145) < 0.065
    assert error_bound(1e6, 1.0, 10) == pytest.approx(1 / 160)
    assert error_bound(100, 1.0, 10) == pytest.approx(100 / 19200)
    with pytest.raises(ValueError):
        error_bound(-1, None, 3)


def test_plan_steps_published():
    assert plan_steps(195745, 0.025).N == 202
    assert plan_steps(194242755, 64.512).N == 126
    assert plan_steps(192, 1.0).N == 2


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 1e9), st.floats(1e-4, 1e2))
def test_plan_steps_is_minimal(s, eta):
    N = plan_steps(s, eta).N
    assert s / (192 * N * N) < eta
    if N > 1:
        assert not s / (192 * (N - 1) ** 2) < eta


@pytest.mark.slow
@pytest.mark.parametrize("t", [1.0, 1.5, 2.0, 2.5])
@pytest.mark.parametrize("j", range(5))
def test_certified_error_against_reference(t, j):
    from fractions import Fraction

    for case in (CaseId(1, 1), CaseId(2, -1)):
        spec = KernelSpec(case, t, j)
        from hlcert.kernels import h_eval

        f = lambda x: h_eval(spec, x)  # noqa: E731
        ref = midpoint_sum(f, REF_N)
        bound = lemma_route_bound(case, Fraction(t), j).value
        for N in (16, 64):
            assert abs(midpoint_sum(f, N) - ref) <= error_bound(bound, None, N)


def test_doubling():
    G = build_G(CaseId(2, -1))
    f = lambda x: evaluate(G, x) ** 2.5  # noqa: E731
    bound = lemma_route_bound(CaseId(2, -1), 2.5, 0).value
    for N in (8, 32, 100):
        assert abs(midpoint_sum(f, 2 * N) - midpoint_sum(f, N)) <= 2 * error_bound(bound, None, N)
