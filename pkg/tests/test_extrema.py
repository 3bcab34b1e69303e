import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlcert import extrema as ex
from hlcert.interval import PI, DomainError, Interval
from hlcert.kernels import kernel_bounds
from hlcert.trigpoly import CaseId, build_G, differentiate, sine_to_upoly, to_upoly

GRID = np.linspace(-1.0, 1.0, 1_000_001)


def u_forms(case):
    G = build_G(case)
    u = ex.var()
    Gu = ex.poly(to_upoly(G))
    V = sine_to_upoly(differentiate(G, 1))
    G2 = ex.poly(to_upoly(differentiate(G, 2)))
    return {
        "G": Gu,
        "G1sq": (1 - u * u) * ex.poly(V * V),
        "G1sq/G": (1 - u * u) * ex.poly(V * V) / Gu,
        "|G2|/G": ex.fabs(G2) / Gu,
        "G2*G": G2 * Gu,
    }


# -- interval arithmetic -----------------------------------------------------

def test_interval_basics():
    a = Interval(1, 2)
    assert (a + 1).contains(2.5)
    assert (a * -1) == Interval(-2, -1) or (a * -1).contains(-1.5)
    assert (Interval(-1, 2) ** 2).lo == 0.0
    with pytest.raises(DomainError):
        Interval(-1, 1).sqrt()
    with pytest.raises(DomainError):
        Interval(1) / Interval(-1, 1)
    with pytest.raises(DomainError):
        Interval(0, 1).log()
    assert PI.contains(math.pi)


def test_exact_sums_are_not_widened():
    assert Interval(1.0) + Interval(2.0) == Interval(3.0)
    s = Interval(0.1) + Interval(0.2)
    assert s.lo < s.hi and s.contains(0.30000000000000004)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0.01, 50))
def test_interval_ops_enclose_float_results(x, y, z):
    X, Y, Z = Interval(x), Interval(y), Interval(z)
    assert (X + Y).contains(x + y)
    assert (X - Y).contains(x - y)
    assert (X * Y).contains(x * y)
    assert (X / Z).contains(x / z)
    assert Z.log().contains(math.log(z))
    assert Z.sqrt().contains(math.sqrt(z))
    assert Interval(min(x, 5.0)).exp().contains(math.exp(min(x, 5.0)))


# -- certified extrema -------------------------------------------------------

def test_published_comparison_constants():
    u = ex.var()
    num = 64 * PI**2 * (1 - u * u) * (6 * u * u + 2 * u - 1) ** 2
    den = 8 * u**3 + 4 * u * u - 4 * u + 1
    assert ex.certified_max(num / den, (-1, 1)).certified_bound < 1300
    assert ex.comparison_constant(num, den, (-1, 1)) < 1300
    assert ex.comparison_constant(num, den, (-1, 1), granularity=100) == 1300


def test_improved_derivative_factor():
    w = ex.var()
    e = 8 * PI * ex.sqrt(w) * (ex.fabs(5 - 6 * w) + 8 * ex.sqrt(1 - w) * ex.fabs(1 - 2 * w))
    r = ex.certified_max(e, (0, 1))
    assert r.witness_value / (8 * math.pi) == pytest.approx(3.6304, abs=2e-4)
    assert r.certified_bound >= r.witness_value


def test_constant_expression():
    r = ex.certified_max(ex.const(5), (0, 1))
    assert r.certified_bound == 5 and r.witness_value == 5


def test_quadratic_vertex():
    u = ex.var()
    e = -(u - 0.3) ** 2 + 2
    r = ex.certified_max(e, (-1, 1), tol=1e-9)
    assert r.certified_bound - 2 <= 1e-9 and r.certified_bound >= 2
    assert r.witness_point == pytest.approx(0.3, abs=1e-4)


def test_min_is_negated_max(case):
    e = u_forms(case)["G2*G"]
    lo = ex.certified_min(e, (-1, 1))
    hi = ex.certified_max(-e, (-1, 1))
    assert lo.certified_bound == -hi.certified_bound


def test_tighter_tolerance_does_not_raise_bound(case):
    e = u_forms(case)["G1sq/G"]
    loose = ex.certified_max(e, (-1, 1), rtol=1e-3).certified_bound
    tight = ex.certified_max(e, (-1, 1), rtol=1e-5).certified_bound
    assert tight <= loose


def test_soundness_against_grid(case):
    for name, e in u_forms(case).items():
        vals = e(GRID)
        assert ex.certified_max(e, (-1, 1)).certified_bound >= vals.max(), name
        assert ex.certified_min(e, (-1, 1)).certified_bound <= vals.min(), name


def test_domain_rejection():
    u = ex.var()
    with pytest.raises(DomainError):
        ex.certified_max(ex.sqrt(u), (-1, 1))
    with pytest.raises(DomainError):
        ex.comparison_constant(ex.const(1), u, (-1, 1))


def test_budget_exhaustion_reports_best_bounds():
    u = ex.var()
    with pytest.raises(ex.BudgetExhausted) as err:
        ex.certified_max(ex.poly(to_upoly(build_G(CaseId(2, 1)))), (-1, 1), tol=1e-15, max_evals=20)
    assert err.value.best_bound >= err.value.best_witness


def test_witness_inside_interval():
    r = ex.certified_max(u_forms(CaseId(1, 1))["G"], (-0.5, 0.25))
    assert -0.5 <= r.witness_point <= 0.25
    assert r.witness_value <= r.certified_bound


def test_kernel_constants_in_published_ranges():
    kp, km = kernel_bounds(CaseId(1, 1)), kernel_bounds(CaseId(1, -1))
    assert 1 / math.e < kp.min_G and 1 / 9 < km.min_G
    assert kp.C1 <= 1300 and km.C1 <= 1100 and kp.C2 <= 2200 and km.C2 <= 4000
    k2p, k2m = kernel_bounds(CaseId(2, 1)), kernel_bounds(CaseId(2, -1))
    assert k2p.C1 <= 2300 and k2m.C1 <= 2600
    assert -18500 < k2p.G2G_min and k2p.G2G_max < 2820
