"""The integrand family H_{t,j} = G^t log^j G and certified bounds for it.

With s = log G the x-derivatives take the form

    H'  = G' G^{t-1} S1(s)
    H'' = G'' G^{t-1} S1(s) + G'^2 G^{t-2} S2(s)

    S1(s) = t s^j + j s^{j-1}
    S2(s) = t(t-1) s^j + j(2t-1) s^{j-1} + j(j-1) s^{j-2}

where terms with negative powers carry a vanishing integer factor and are
dropped, which covers j = 0 and j = 1.  Every sup-norm bound below reduces
to a one-dimensional certified maximum in s over the certified range of
log G, combined with the comparison constants of G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import extrema as ex
from .fperror import computational_error
from .interval import Interval, pi_power
from .quadrature import midpoint_sum
from .trigpoly import CaseId, build_G, differentiate, evaluate, sine_to_upoly, to_upoly

__all__ = [
    "KernelSpec",
    "KernelBounds",
    "HxxBound",
    "UnsupportedKernel",
    "kernel_bounds",
    "h_eval",
    "h_x",
    "h_xx",
    "log_weights",
    "bound_h_xx",
    "h_xx_bound",
    "lemma_route_bound",
    "bound_h_sup",
    "bound_h_l1",
    "d_deriv_estimate",
    "improved_g1_bound",
]

RTOL = 1e-9

# (k, t) -> log powers j covered by the H'' norm lemmas
LEMMA_RANGES = {(1, Fraction(3, 2)): range(3, 11), (2, Fraction(5, 2)): range(4, 12)}
ENDPOINT_T = (Fraction(1), Fraction(2))
ENDPOINT_J = (1, 2)


class UnsupportedKernel(ValueError):
    """No certified H'' bound route exists for this (k, t, j)."""


@dataclass(frozen=True)
class KernelSpec:
    case: CaseId
    t: float
    j: int

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be at least 1, got {self.t}")
        if self.j < 0:
            raise ValueError(f"j must be non-negative, got {self.j}")


@dataclass(frozen=True)
class KernelBounds:
    """Certified facts about G = G_{k,+-} used by every H'' estimate."""

    case: CaseId
    sup_G: float  # coefficient sum, attained at x = 0
    min_G: float  # certified lower bound of min G
    min_G_witness: float
    sup_G1: float  # coefficient sum of G'
    sup_G1_sharp: float  # certified max |G'| via the u-form
    sup_G2: float  # coefficient sum of G''
    C1: float  # G'^2 <= C1 G
    C2: float  # |G''| <= C2 G
    G2G_max: float
    G2G_min: float

    @property
    def log_range(self) -> tuple[float, float]:
        """Outward-rounded enclosure of log G over the torus."""
        lo = Interval(self.min_G).log().lo
        hi = Interval(self.sup_G).log().hi
        return lo, hi


def _norm_up(p) -> float:
    """coeff_norm rounded outward, pi factor included."""
    total = sum(abs(c) for c in p.cos_coeffs) + sum(abs(c) for c in p.sin_coeffs)
    iv = Interval.from_fraction(total)
    return (iv * pi_power(p.pi_power)).hi if p.pi_power else iv.hi


@lru_cache(maxsize=None)
def kernel_bounds(case: CaseId, rtol: float = RTOL) -> KernelBounds:
    """Certified constants of G; a looser ``rtol`` is faster and still one-sided."""
    G = build_G(case)
    G1 = differentiate(G, 1)
    G2 = differentiate(G, 2)
    u = ex.var()
    Gu = ex.poly(to_upoly(G))
    V = sine_to_upoly(G1)
    g1_sq = (1 - u * u) * ex.poly(V * V)
    G2u = ex.poly(to_upoly(G2))
    dom = (-1.0, 1.0)

    gmin = ex.certified_min(Gu, dom, rtol=rtol)
    if not gmin.certified_bound > 0:
        raise ex.DomainError(f"{case.label}: G not provably positive")
    sharp = ex.certified_max(g1_sq, dom, rtol=rtol).certified_bound
    return KernelBounds(
        case=case,
        sup_G=_norm_up(G),
        min_G=gmin.certified_bound,
        min_G_witness=gmin.witness_value,
        sup_G1=_norm_up(G1),
        sup_G1_sharp=Interval(sharp).sqrt().hi,
        sup_G2=_norm_up(G2),
        C1=ex.comparison_constant(g1_sq, Gu, dom, rtol=rtol),
        C2=ex.comparison_constant(ex.fabs(G2u), Gu, dom, rtol=rtol),
        G2G_max=ex.certified_max(G2u * Gu, dom, rtol=rtol).certified_bound,
        G2G_min=ex.certified_min(G2u * Gu, dom, rtol=rtol).certified_bound,
    )


# -- pointwise evaluation --------------------------------------------------

def log_weights(t, j: int) -> tuple[list[Fraction], list[Fraction]]:
    """Ascending coefficients of S1 and S2 in s = log G."""
    t = Fraction(t)
    s1 = [Fraction(0)] * (j + 1)
    s2 = [Fraction(0)] * (j + 1)
    s1[j] += t
    s2[j] += t * (t - 1)
    if j >= 1:
        s1[j - 1] += j
        s2[j - 1] += j * (2 * t - 1)
    if j >= 2:
        s2[j - 2] += j * (j - 1)
    return s1, s2


def _polyval(coeffs, s):
    acc = np.zeros_like(s)
    for c in reversed(coeffs):
        acc = acc * s + float(c)
    return acc


def _G_parts(case: CaseId, x):
    G = build_G(case)
    return evaluate(G, x), evaluate(differentiate(G, 1), x), evaluate(differentiate(G, 2), x)


def h_eval(spec: KernelSpec, x):
    """G^t log^j G (natural log)."""
    g = np.asarray(evaluate(build_G(spec.case), x), dtype=float)
    out = np.power(g, spec.t) * np.log(g) ** spec.j
    return float(out) if out.ndim == 0 else out


def h_x(spec: KernelSpec, x):
    g, g1, _ = (np.asarray(v, dtype=float) for v in _G_parts(spec.case, x))
    s1, _ = log_weights(spec.t, spec.j)
    out = g1 * np.power(g, spec.t - 1) * _polyval(s1, np.log(g))
    return float(out) if out.ndim == 0 else out


def h_xx(spec: KernelSpec, x):
    g, g1, g2 = (np.asarray(v, dtype=float) for v in _G_parts(spec.case, x))
    s1, s2 = log_weights(spec.t, spec.j)
    L = np.log(g)
    out = g2 * np.power(g, spec.t - 1) * _polyval(s1, L) + g1**2 * np.power(g, spec.t - 2) * _polyval(s2, L)
    return float(out) if out.ndim == 0 else out


# -- sup-norm bounds for H'' -----------------------------------------------

@dataclass(frozen=True)
class HxxBound:
    value: float
    route: str
    terms: dict = field(default_factory=dict)


def _smax(expr, interval, rtol: float = RTOL) -> float:
    lo, hi = interval
    if not lo < hi:
        # degenerate range: evaluate the enclosure at the single point
        return expr.enclose(Interval(lo))[0].hi
    return ex.certified_max(expr, interval, rtol=rtol).certified_bound


def _iadd(*values: float) -> float:
    acc = Interval(0.0)
    for v in values:
        acc = acc + v
    return acc.hi


def _imul(*values: float) -> float:
    acc = Interval(1.0)
    for v in values:
        acc = acc * v
    return acc.hi


def _exp_weight(a, s: ex.Expr | None = None) -> ex.Expr:
    """exp(a s) as an expression in s (default: the variable); a may be a Fraction."""
    s = ex.var() if s is None else s
    a = Fraction(a)
    if a == 0:
        return ex.const(1.0)
    return ex.exp(ex.const(a) * s)


@lru_cache(maxsize=None)
def lemma_route_bound(case: CaseId, t: Fraction, j: int, rtol: float = RTOL, sharp: bool = False) -> HxxBound:
    """|H''| <= ||G''|| max G^{t-1}|S1| + max(psi on {G <= 1}, phi on {G > 1}).

    On {G <= 1} the factor G'^2 is replaced by C1 G, on {G > 1} by
    ||G'||^2: the coefficient sum by default, the certified maximum of |G'|
    with ``sharp``.
    """
    t = Fraction(t)
    kb = kernel_bounds(case, rtol)
    slo, shi = kb.log_range
    s1, s2 = log_weights(t, j)
    S1 = ex.fabs(ex.poly(s1))
    S2 = ex.fabs(ex.poly(s2))
    first_w = _smax(_exp_weight(t - 1) * S1, (slo, shi), rtol)
    psi_w = _smax(_exp_weight(t - 1) * S2, (slo, 0.0), rtol)
    phi_w = _smax(_exp_weight(t - 2) * S2, (0.0, shi), rtol)
    first = _imul(kb.sup_G2, first_w)
    psi = _imul(kb.C1, psi_w)
    g1 = kb.sup_G1_sharp if sharp else kb.sup_G1
    phi = _imul(g1, g1, phi_w)
    value = _iadd(first, max(psi, phi))
    return HxxBound(value, "lemma-sharp" if sharp else "lemma", {"first": first, "psi": psi, "phi": phi})


def _endpoint_t1(case: CaseId, j: int) -> HxxBound:
    kb = kernel_bounds(case)
    rng = kb.log_range
    s1, s2 = log_weights(1, j)
    m1 = _smax(ex.fabs(ex.poly(s1)), rng)
    m2 = _smax(ex.fabs(ex.poly(s2)), rng)
    first = _imul(kb.sup_G2, m1)
    second = _imul(kb.C1, m2)
    return HxxBound(_iadd(first, second), "endpoint-t1", {"first": first, "second": second})


def _endpoint_t2(case: CaseId, j: int) -> HxxBound:
    """Three branches: {G >= 1, G'' > 0}, {G >= 1, G'' <= 0}, {G < 1}."""
    kb = kernel_bounds(case)
    slo, shi = kb.log_range
    s1, s2 = log_weights(2, j)
    S1, S2 = ex.poly(s1), ex.poly(s2)
    B = (0.0, shi)
    s1_max = _smax(ex.fabs(S1), B)
    s2_max = _smax(ex.fabs(S2), B)
    # on s >= 0 non-negative coefficients settle the sign exactly
    nonneg = all(c >= 0 for c in s1 + s2) or (
        ex.certified_min(S1, B, rtol=RTOL).certified_bound >= 0
        and ex.certified_min(S2, B, rtol=RTOL).certified_bound >= 0
    )
    g1sq = _imul(kb.sup_G1_sharp, kb.sup_G1_sharp)
    pos = _iadd(_imul(max(kb.G2G_max, 0.0), s1_max), _imul(g1sq, s2_max))
    neg_a = _imul(max(-kb.G2G_min, 0.0), s1_max)
    neg_b = _imul(g1sq, s2_max)
    # with S1, S2 >= 0 the two terms have opposite signs when G'' <= 0
    neg = max(neg_a, neg_b) if nonneg else _iadd(neg_a, neg_b)
    sv = ex.var()
    below = _smax(
        ex.exp(sv) * (ex.const(kb.sup_G2) * ex.fabs(S1) + ex.const(kb.C1) * ex.fabs(S2)),
        (slo, 0.0),
    )
    value = max(pos, neg, below)
    return HxxBound(value, "endpoint-t2", {"G2_positive": pos, "G2_nonpositive": neg, "G_below_1": below})


def _horner_expr(coeffs, L):
    acc = ex.const(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * L + ex.const(c)
    return acc


@lru_cache(maxsize=None)
def direct_route_bound(case: CaseId, t: Fraction, j: int, rtol: float = 1e-6) -> HxxBound:
    """Branch and bound on |H''| itself, written in u = cos 2 pi x on [-1, 1]."""
    t = Fraction(t)
    G = build_G(case)
    u = ex.var()
    Gu = ex.poly(to_upoly(G))
    V = sine_to_upoly(differentiate(G, 1))
    g1_sq = (1 - u * u) * ex.poly(V * V)
    g2 = ex.poly(to_upoly(differentiate(G, 2)))
    L = ex.log(Gu)
    s1, s2 = log_weights(t, j)
    H = _exp_weight(t - 1, L) * g2 * _horner_expr(s1, L) + _exp_weight(t - 2, L) * g1_sq * _horner_expr(s2, L)
    r = ex.certified_max(ex.fabs(H), (-1.0, 1.0), rtol=rtol)
    return HxxBound(r.certified_bound, "direct", {"witness_value": r.witness_value})


def _exploratory(spec: KernelSpec, points: int = 100_001) -> HxxBound:
    x = np.linspace(0.0, 0.5, points)
    m = float(np.max(np.abs(h_xx(spec, x))))
    return HxxBound(1.1 * m, "exploratory", {"grid_max": m})


def _combine(planning: HxxBound, others: list[HxxBound], extra: dict) -> HxxBound:
    """Smallest of several sound bounds; ``planning`` is the analytic route that sizes step counts."""
    best = min([planning, *others], key=lambda b: b.value)
    terms = {**best.terms, **extra, "planning": planning.value}
    terms.update({b.route: b.value for b in others})
    return HxxBound(best.value, best.route, terms)


def h_xx_bound(spec: KernelSpec, exploratory: bool = False) -> HxxBound:
    """Bound on ||H''_{t,j}||_inf with the route that produced it."""
    t = Fraction(spec.t)
    k = spec.case.k
    if spec.j in LEMMA_RANGES.get((k, t), ()):
        coarse = lemma_route_bound(spec.case, t, spec.j)
        fine = lemma_route_bound(spec.case, t, spec.j, sharp=True)
        return _combine(coarse, [fine, direct_route_bound(spec.case, t, spec.j)],
                        {"coefficient": coarse.value, "sharp": fine.value})
    if k in (1, 2) and spec.j in ENDPOINT_J and t in ENDPOINT_T:
        e = _endpoint_t1(spec.case, spec.j) if t == 1 else _endpoint_t2(spec.case, spec.j)
        return _combine(e, [direct_route_bound(spec.case, t, spec.j)], {"endpoint": e.value})
    if exploratory:
        return _exploratory(spec)
    raise UnsupportedKernel(
        f"no certified H'' route for k={k}, t={spec.t}, j={spec.j}; "
        "pass exploratory=True for a non-certified grid estimate"
    )


def bound_h_xx(spec: KernelSpec, exploratory: bool = False) -> float:
    return h_xx_bound(spec, exploratory).value


# -- bounds on H itself ----------------------------------------------------

def bound_h_sup(case: CaseId, t_range: tuple[float, float], m: int) -> float:
    """max over xi in t_range and x of |G^xi log^m G|.

    On {G >= 1} the worst case is G = sup G, xi = b.  On {G < 1} the
    function g^a |log g|^m peaks at log g = -m/a if that is in range,
    otherwise at g = min G.
    """
    a, b = map(float, t_range)
    kb = kernel_bounds(case)
    slo, shi = kb.log_range
    upper = (Interval(b) * Interval(shi)).exp() * Interval(shi) ** m
    if m == 0:
        return max(upper.hi, 1.0)
    crit = m / a
    u = Interval(crit) if crit <= -slo else Interval(-slo)
    lower = (-(Interval(a) * u)).exp() * u**m
    return max(upper.hi, lower.hi)


def bound_h_l1(case: CaseId, t_range: tuple[float, float], m: int, N: int = 1024) -> dict:
    """Certified bound on max_xi int_0^{1/2} G^xi |log G|^m dx for even m.

    Uses G^xi <= G^a + G^b on [a, b] and bounds each integral by its
    midpoint sum plus the certified quadrature and rounding errors.
    """
    if m % 2:
        raise ValueError("the L1 route needs an even log power")
    a, b = (Fraction(v) for v in t_range)
    kb = kernel_bounds(case)
    parts = {}
    total = Interval(0.0)
    for t in (a, b):
        spec = KernelSpec(case, float(t), m)
        hb = lemma_route_bound(case, t, m).value
        quad = hb / (192 * N * N)
        fp = computational_error(m, float(t), kb.min_G, kb.sup_G).derived
        est = midpoint_sum(lambda x, s=spec: h_eval(s, x), N)
        total = total + est + quad + fp
        parts[str(t)] = {"estimate": est, "h_xx_bound": hb, "quad_error": quad, "fp_error": fp}
    return {"bound": total.hi, "N": N, "parts": parts}


def d_deriv_estimate(j: int, t: float, k: int, N: int) -> float:
    """Midpoint estimate of d^(j)(t) = int_0^{1/2} (G_-^t log^j G_- - G_+^t log^j G_+)."""
    minus = KernelSpec(CaseId(k, -1), t, j) if t >= 1 else None
    plus = KernelSpec(CaseId(k, 1), t, j) if t >= 1 else None
    if minus is None:
        raise ValueError("t must be at least 1")
    return midpoint_sum(lambda x: h_eval(minus, x), N) - midpoint_sum(lambda x: h_eval(plus, x), N)


def improved_g1_bound() -> dict:
    """The k = 2 cancellation bound on ||G'_{+-}|| in the variable w = sin^2(2 pi x)."""
    w = ex.var()
    plus = ex.sqrt(w) * (ex.fabs(5 - 6 * w) + 8 * ex.sqrt(1 - w) * ex.fabs(1 - 2 * w))
    minus = ex.sqrt(w) * (ex.fabs(2 - 3 * w) + 4 * ex.sqrt(1 - w) * ex.fabs(1 - 2 * w))
    rp = ex.certified_max(plus, (0.0, 1.0), rtol=RTOL)
    rm = ex.certified_max(minus, (0.0, 1.0), rtol=RTOL)
    bound = max(_imul(8, rp.certified_bound), _imul(16, rm.certified_bound))
    return {
        "plus_factor": rp.witness_value,
        "minus_factor": rm.witness_value,
        "plus_bound": rp.certified_bound,
        "minus_bound": rm.certified_bound,
        "bound_over_pi": bound,
    }
