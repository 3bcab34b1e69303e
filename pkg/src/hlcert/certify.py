"""Proof skeletons for k = 0, 1, 2.

k = 1 proves d''' < 0 on [1, 2] and d'(1) > 0; together with d(1) = d(2) = 0
this forces d > 0 on (1, 2).  k = 2 proves d'''' < 0 on [2, 3] together with
d'(2) > 0 and d''(2) > 0 and the zeros d(2) = d(3) = 0.  Each sign claim
on an interval comes from a Taylor certificate: an approximate polynomial
P_n around the midpoint with a total error band delta, followed by a
derivative chain showing P_n + delta < 0.
"""

from __future__ import annotations

import math
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .fperror import computational_error
from .kernels import (
    RTOL,
    KernelSpec,
    bound_h_l1,
    bound_h_sup,
    d_deriv_estimate,
    h_xx_bound,
    kernel_bounds,
)
from .quadrature import error_bound, plan_steps
from .trigpoly import CaseId, build_G, mean_value, power

__all__ = [
    "CertificateError",
    "UnsupportedCase",
    "Fact",
    "ErrorBudgetRow",
    "TaylorCertificate",
    "SignCertificate",
    "LedgerEntry",
    "ProofReport",
    "TABLE_BUDGETS",
    "endpoint_positivity",
    "build_taylor_certificate",
    "certify_negative",
    "fp_error_ledger",
    "verify_k0",
    "parseval_fact",
    "prove_case",
]

FP_RELATIVE_RULE = 1e-4

# (m, center, delta_j, remainder allotment, remainder route) per k
TABLE_BUDGETS = {
    1: dict(m=3, center=Fraction(3, 2), n=7,
            deltas=("0.05", "0.0604", "0.044", "0.02", "0.008", "0.002", "0.0004", "0.0002"),
            remainder="0.046", method="sup"),
    2: dict(m=4, center=Fraction(5, 2), n=7,
            deltas=("0.13", "0.15", "0.1", "0.05", "0.015", "0.004", "0.0008", "0.0002"),
            remainder="0.05", method="l1"),
}
ENDPOINTS = {1: [(1, 1, 0.09)], 2: [(1, 2, 0.034), (2, 2, 0.13)]}


class CertificateError(RuntimeError):
    """A certificate could not be constructed within its budget."""


class UnsupportedCase(ValueError):
    """Only k = 0, 1, 2 carry a certified proof."""


@dataclass(frozen=True)
class Fact:
    name: str
    holds: bool
    evidence: dict = field(default_factory=dict)
    kind: str = "computed"  # "derived" for logical steps that are not computed


@dataclass(frozen=True)
class LedgerEntry:
    j: int
    t: float
    target: float
    delta_c: float
    published_form: float
    coarse_form: float
    derived: float
    margin: float  # delta_c / target
    holds: bool


@dataclass(frozen=True)
class ErrorBudgetRow:
    j: int
    delta_j: Fraction
    eta_j: Fraction
    N_j: int
    dbar_j: float
    h_xx_bound: float
    quad_error: float
    fp_error: float


@dataclass(frozen=True)
class TaylorCertificate:
    k: int
    m: int
    center: Fraction
    n: int
    rows: tuple[ErrorBudgetRow, ...]
    remainder_bound: float
    remainder_delta: Fraction
    remainder_method: str
    total_delta: Fraction

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        half = Fraction(1, 2)
        return self.center - half, self.center + half

    @property
    def dbar(self) -> list[float]:
        return [r.dbar_j for r in self.rows]

    def P(self, t):
        """The approximate Taylor polynomial P_n at t (numpy friendly)."""
        x = np.asarray(t, dtype=float) - float(self.center)
        out = sum(r.dbar_j * x**r.j / math.factorial(r.j) for r in self.rows)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SignCertificate:
    shifted_poly: tuple[Fraction, ...]  # p = P_n + delta in powers of (t - center)
    P_left: float
    endpoint_derivs: tuple[float, ...]  # p^(i)(left), i = 0..n-3
    quad_tail: tuple[float, float] | None  # (leading coefficient, discriminant)
    verdict: str
    failed_at: int | None = None


@dataclass
class ProofReport:
    k: int
    facts: list[Fact]
    verdict: str
    provenance: dict
    notes: list[str] = field(default_factory=list)


# -- ledger ----------------------------------------------------------------

def fp_error_ledger(j: int, t: float, target: float, g_min: float | None = None, g_max: float = 9.0) -> LedgerEntry:
    """Rounding error of one integrand value against the 1e-4 relative rule.

    The asserted Delta_c is the larger of the coarse closed form and the
    derived model (which keeps the factor t lost in the closed form).
    ``g_min`` defaults to 0.05, below every certified min G for k = 1, 2.
    """
    if not 1 <= t <= 3:
        raise ValueError("the model is stated for 1 <= t <= 3")
    if j > 11:
        raise ValueError("the model is stated for j <= 11")
    model = computational_error(j, t, g_min or 0.05, g_max)
    delta_c = max(model.coarse_form, model.derived)
    return LedgerEntry(
        j=j, t=float(t), target=float(target), delta_c=delta_c,
        published_form=model.published_form, coarse_form=model.coarse_form, derived=model.derived,
        margin=delta_c / target, holds=delta_c < FP_RELATIVE_RULE * target,
    )


def _fp_per_point(case: CaseId, t: float, j: int) -> float:
    kb = kernel_bounds(case)
    return computational_error(j, float(t), kb.min_G, kb.sup_G).derived


def _certified_plan(k: int, t, j: int, eta: float):
    """Smallest N whose quadrature plus rounding error per integral stays below eta."""
    hb = [h_xx_bound(KernelSpec(CaseId(k, s), float(t), j)) for s in (1, -1)]
    sup2 = max(b.terms["planning"] for b in hb)
    plan = plan_steps(sup2, eta)
    fp = max(_fp_per_point(CaseId(k, s), t, j) for s in (1, -1))
    N = plan.N
    # a mean of values each off by at most fp is off by at most fp
    while error_bound(sup2, None, N) + fp >= eta:
        N += 1
    return N, sup2, error_bound(sup2, None, N), fp, hb


# -- endpoint lemmas ---------------------------------------------------------

def endpoint_positivity(k: int, j0: int, t0: float, threshold: float) -> Fact:
    """d^(j0)(t0) > 0 from a midpoint estimate whose total error is below threshold."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    N, sup2, quad, fp, hb = _certified_plan(k, t0, j0, threshold / 2)
    est = d_deriv_estimate(j0, t0, k, N)
    total_err = 2 * (quad + fp)
    ledger = fp_error_ledger(j0, t0, threshold / 2)
    holds = total_err < threshold and est - threshold > 0 and ledger.holds
    return Fact(
        name=f"d^({j0})({t0:g}) > 0",
        holds=holds,
        evidence={
            "k": k, "j": j0, "t": float(t0), "threshold": threshold, "N": N,
            "h_xx_bound": sup2, "h_xx_route": hb[0].route,
            "h_xx_terms": {("plus" if i == 0 else "minus"): b.terms for i, b in enumerate(hb)},
            "quad_error_per_integral": quad, "fp_error_per_integral": fp,
            "total_error": total_err, "estimate": est,
            "fp_ledger_margin": ledger.margin,
        },
    )


# -- Taylor certificates -----------------------------------------------------

def _remainder(k: int, m: int, center: Fraction, n: int, method: str) -> tuple[float, dict]:
    order = m + n + 1
    t_range = (float(center - Fraction(1, 2)), float(center + Fraction(1, 2)))
    fac = math.factorial(n + 1)
    if method == "sup":
        sups = [bound_h_sup(CaseId(k, s), t_range, order) for s in (1, -1)]
        return (sups[0] + sups[1]) / (fac * 2 ** (n + 2)), {"sup_plus": sups[0], "sup_minus": sups[1]}
    if method == "l1":
        parts = [bound_h_l1(CaseId(k, s), t_range, order) for s in (1, -1)]
        ints = [p["bound"] for p in parts]
        return (ints[0] + ints[1]) / (fac * 2 ** (n + 1)), {"l1_plus": parts[0], "l1_minus": parts[1]}
    raise ValueError(f"unknown remainder method {method!r}")


def build_taylor_certificate(
    k: int,
    m: int,
    center,
    n: int,
    budget: Sequence,
    remainder_allotment=None,
    remainder_method: str = "sup",
) -> TaylorCertificate:
    """Approximate d^(m+j)(center), j = 0..n, within budget and bound the remainder.

    Row j gets eta_j = delta_j j! 2^j / 2 per integral; then
    |d^(m+j)(c) - dbar_j| |t - c|^j / j! <= 2 eta_j 2^-j / j! = delta_j.
    """
    if len(budget) != n + 1:
        raise ValueError(f"budget needs {n + 1} entries, got {len(budget)}")
    center = Fraction(center)
    rows = []
    for j, d in enumerate(budget):
        delta = Fraction(str(d)) if isinstance(d, (str, float)) else Fraction(d)
        eta = delta * math.factorial(j) * 2**j / 2
        N, sup2, quad, fp, _ = _certified_plan(k, center, m + j, float(eta))
        if not quad + fp < eta:
            raise CertificateError(f"row {j}: error {quad + fp} does not fit eta {float(eta)}")
        dbar = d_deriv_estimate(m + j, float(center), k, N)
        rows.append(ErrorBudgetRow(j, delta, eta, N, dbar, sup2, quad, fp))
    rem, _ = _remainder(k, m, center, n, remainder_method)
    if remainder_allotment is None:
        rem_delta = Fraction(rem)
    else:
        rem_delta = Fraction(str(remainder_allotment))
        if rem > rem_delta:
            raise CertificateError(f"remainder bound {rem:.6g} exceeds its allotment {float(rem_delta)}")
    total = sum((r.delta_j for r in rows), Fraction(0)) + rem_delta
    return TaylorCertificate(k, m, center, n, tuple(rows), rem, rem_delta, remainder_method, total)


def _derivative_at(coeffs: Sequence[Fraction], i: int, x: Fraction) -> Fraction:
    """i-th derivative of sum coeffs[l] x^l, exactly."""
    acc = Fraction(0)
    for l in range(len(coeffs) - 1, i - 1, -1):
        acc = acc * x + coeffs[l] * math.perm(l, i)
    return acc


def certify_negative(cert: TaylorCertificate) -> SignCertificate:
    """Show P_n + delta < 0 on [center - 1/2, center + 1/2].

    All p^(i)(left) < 0 for i <= n - 3 and p^(n-2) < 0 everywhere (a
    quadratic with negative leading coefficient and discriminant) give
    negativity on [left, oo) by integrating upward.  Arithmetic is exact.
    """
    n = cert.n
    coeffs = [Fraction(r.dbar_j) / math.factorial(r.j) for r in cert.rows]
    coeffs[0] += cert.total_delta
    left = Fraction(-1, 2)
    P_left = float(_derivative_at(coeffs, 0, left) - cert.total_delta)
    if n < 2:
        vals = [float(_derivative_at(coeffs, 0, x)) for x in (left, -left)]
        bad = next((i for i, v in enumerate(vals) if not v < 0), None)
        return SignCertificate(tuple(coeffs), P_left, tuple(vals), None,
                               "failed" if bad is not None else "negative_on_interval", bad)
    derivs = []
    for i in range(n - 2):
        v = _derivative_at(coeffs, i, left)
        derivs.append(float(v))
        if not v < 0:
            return SignCertificate(tuple(coeffs), P_left, tuple(derivs), None, "failed", i)
    # p^(n-2)(x) = c0 + c1 x + c2 x^2
    c0 = coeffs[n - 2] * math.factorial(n - 2)
    c1 = coeffs[n - 1] * math.factorial(n - 1)
    c2 = coeffs[n] * math.factorial(n) / 2
    disc = c1 * c1 - 4 * c0 * c2
    tail = (float(c2), float(disc))
    if not (c2 < 0 and disc < 0):
        return SignCertificate(tuple(coeffs), P_left, tuple(derivs), tail, "failed", n - 2)
    return SignCertificate(tuple(coeffs), P_left, tuple(derivs), tail, "negative_on_interval")


# -- k = 0 -------------------------------------------------------------------

def _phi_dy(p: float, x, y):
    c = np.cos(2 * np.pi * x)
    plus = 4 * c * c + 4 * c * np.cos(np.pi * y) + 1
    minus = 4 * c * c - 4 * c * np.cos(np.pi * y) + 1
    bracket = plus ** ((p - 2) / 2) - minus ** ((p - 2) / 2)
    return -2 * p * np.pi * np.sin(np.pi * y) * c * bracket


def _f_p(p: float, y: float, N: int = 1 << 14) -> float:
    """int_{-1/4}^{1/4} |2e(y/2)cos(2 pi x) + 1|^p + |2e(y/2)cos(2 pi x) - 1|^p dx."""
    x = -0.25 + (np.arange(N) + 0.5) / (2 * N)
    c = np.cos(2 * np.pi * x)
    cy = np.cos(np.pi * y)
    vals = (4 * c * c + 4 * c * cy + 1) ** (p / 2) + (4 * c * c - 4 * c * cy + 1) ** (p / 2)
    return float(np.sum(vals)) / (2 * N)


def verify_k0(p_samples: Sequence[float], grid_density: int = 64) -> Fact:
    """Sign of dPhi/dy on an open grid in (-1/4, 1/4) x (0, 1/2) and the f_p(0) vs f_p(1/2) order."""
    if grid_density < 64:
        raise ValueError("grid_density must be at least 64")
    g = (np.arange(grid_density) + 0.5) / grid_density
    X, Y = np.meshgrid(-0.25 + g / 2, g / 2)
    per_p = []
    ok = True
    for p in p_samples:
        if p <= 0:
            raise ValueError("p must be positive")
        f0, fh = _f_p(p, 0.0), _f_p(p, 0.5)
        if p == 2:
            good = abs(f0 - fh) < 1e-9
            per_p.append({"p": p, "f0": f0, "f_half": fh, "holds": good})
        else:
            d = _phi_dy(p, X, Y)
            expected = -1.0 if p > 2 else 1.0
            sign_ok = bool(np.all(np.sign(d) == expected))
            order_ok = f0 > fh if p > 2 else fh > f0
            good = sign_ok and order_ok
            per_p.append({
                "p": p, "f0": f0, "f_half": fh, "dphi_dy_sign": int(expected),
                "max_dphi_dy": float(d.max()), "min_dphi_dy": float(d.min()),
                "holds": good,
            })
        ok &= good
    return Fact("f_p peaks at 0 for p > 2 and at 1/2 for p < 2", bool(ok),
                {"grid_density": grid_density, "samples": per_p})


# -- orchestration -----------------------------------------------------------

def parseval_fact(k: int, degree: int, expected: int) -> Fact:
    means = [mean_value(power(build_G(CaseId(k, s)), degree)) for s in (1, -1)]
    return Fact(
        f"mean(G_+^{degree}) = mean(G_-^{degree}) = {expected}",
        means[0] == means[1] == expected,
        {"k": k, "degree": degree, "plus": str(means[0]), "minus": str(means[1])},
    )


def _bounds_fact(k: int) -> Fact:
    inv = {}
    for s in (1, -1):
        kb = kernel_bounds(CaseId(k, s))
        inv[kb.case.label] = {
            "min_G": kb.min_G, "sup_G": kb.sup_G, "sup_G1": kb.sup_G1, "sup_G1_sharp": kb.sup_G1_sharp,
            "sup_G2": kb.sup_G2, "C1": kb.C1, "C2": kb.C2, "G2G_max": kb.G2G_max, "G2G_min": kb.G2G_min,
        }
    holds = all(v["min_G"] > 0 for v in inv.values())
    return Fact("certified constants of G", holds, inv)


def _certificate_facts(k: int) -> list[Fact]:
    b = TABLE_BUDGETS[k]
    cert = build_taylor_certificate(k, b["m"], b["center"], b["n"], b["deltas"], b["remainder"], b["method"])
    rows = [{
        "j": r.j, "delta_j": str(r.delta_j), "eta_j": str(r.eta_j), "N_j": r.N_j, "dbar_j": r.dbar_j,
        "h_xx_bound": r.h_xx_bound, "quad_error": r.quad_error, "fp_error": r.fp_error,
        "fp_ledger_margin": fp_error_ledger(b["m"] + r.j, float(b["center"]), float(r.eta_j)).margin,
    } for r in cert.rows]
    budget = Fact(
        f"|d^({b['m']}) - P_{b['n']}| <= {float(cert.total_delta):g} on [{cert.interval[0]}, {cert.interval[1]}]",
        all(r.quad_error + r.fp_error < r.eta_j for r in cert.rows) and cert.remainder_bound <= cert.remainder_delta,
        {
            "m": b["m"], "center": str(cert.center), "n": cert.n, "rows": rows,
            "remainder_method": cert.remainder_method, "remainder_bound": cert.remainder_bound,
            "remainder_delta": str(cert.remainder_delta), "total_delta": str(cert.total_delta),
        },
    )
    sc = certify_negative(cert)
    sign = Fact(
        f"d^({b['m']}) < 0 on [{cert.interval[0]}, {cert.interval[1]}]",
        sc.verdict == "negative_on_interval",
        {
            "dbar": cert.dbar, "total_delta": str(cert.total_delta), "P_left": sc.P_left,
            "endpoint_derivs": list(sc.endpoint_derivs),
            "quad_tail": list(sc.quad_tail) if sc.quad_tail else None,
            "verdict": sc.verdict, "failed_at": sc.failed_at,
        },
    )
    return [budget, sign]


def prove_case(k: int, *, timings: bool = False) -> ProofReport:
    import time

    if k not in (0, 1, 2):
        raise UnsupportedCase(
            f"no certified proof for k={k}; use the exploratory tabulator (hlcert tabulate --k {k})"
        )
    start = time.perf_counter()
    facts: list[Fact] = []
    notes: list[str] = []
    if k == 0:
        facts.append(verify_k0([0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0], 128))
    else:
        lo = k
        facts.append(parseval_fact(k, lo, 3 if k == 1 else 15))
        facts.append(parseval_fact(k, lo + 1, 15 if k == 1 else 93))
        facts.append(_bounds_fact(k))
        for j0, t0, th in ENDPOINTS[k]:
            facts.append(endpoint_positivity(k, j0, t0, th))
        facts.extend(_certificate_facts(k))
        m = TABLE_BUDGETS[k]["m"]
        facts.append(Fact(
            f"d > 0 on ({lo}, {lo + 1})",
            all(f.holds for f in facts),
            {"argument": (
                f"d({lo}) = d({lo + 1}) = 0 and d^({m}) < 0 on [{lo}, {lo + 1}]; "
                "Rolle's theorem and the positive endpoint derivatives exclude an interior zero"
            )},
            kind="derived",
        ))
        notes.append("Taylor budgets follow the tabulated delta_j column")
        if k == 2:
            notes.append("remainder bounded through the integral form of the highest derivative")
    verdict = "proven" if all(f.holds for f in facts) else "not_proven"
    prov = {"version": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "extrema_rtol": RTOL, "fp_relative_rule": FP_RELATIVE_RULE}
    if timings:
        prov["seconds"] = round(time.perf_counter() - start, 3)
    return ProofReport(k, facts, verdict, prov, notes)
