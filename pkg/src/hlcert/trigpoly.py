"""Real trigonometric polynomials in x with period 1, and their Chebyshev forms.

A :class:`TrigPoly` stores

    pi**pi_power * (a_0 + sum_m a_m cos(2 pi m x) + sum_m b_m sin(2 pi m x))

with exact rational coefficients ``a_m``, ``b_m``.  Keeping the power of pi
outside the coefficients means that G, G' and G'' all have small integer
coefficients and trivial sup-norm bounds such as ``24*pi`` are reproduced
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "CaseId",
    "TrigPoly",
    "UPoly",
    "build_G",
    "differentiate",
    "evaluate",
    "to_upoly",
    "sine_to_upoly",
    "multiply",
    "power",
    "mean_value",
    "coeff_norm",
]


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class CaseId:
    """Gap index ``k`` and sign of the top exponential in ``1 + e(x) +- e((k+2)x)``."""

    k: int
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def label(self) -> str:
        return f"k={self.k}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class TrigPoly:
    cos_coeffs: tuple[Fraction, ...] = ()
    # sin_coeffs[0] multiplies sin(2 pi x); there is no zero-frequency sine slot
    sin_coeffs: tuple[Fraction, ...] = ()
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", _trim([_frac(c) for c in self.cos_coeffs]))
        object.__setattr__(self, "sin_coeffs", _trim([_frac(c) for c in self.sin_coeffs]))

    @property
    def degree(self) -> int:
        return max(len(self.cos_coeffs) - 1, len(self.sin_coeffs), 0)

    @property
    def scale(self) -> float:
        return math.pi**self.pi_power

    def is_even(self) -> bool:
        return not self.sin_coeffs

    def is_odd(self) -> bool:
        return not self.cos_coeffs

    def cos_float(self) -> list[float]:
        """Cosine coefficients as floats, pi factor included."""
        return [float(c) * self.scale for c in self.cos_coeffs]

    def sin_float(self) -> list[float]:
        return [float(c) * self.scale for c in self.sin_coeffs]

    def __call__(self, x):
        return evaluate(self, x)

    def __neg__(self) -> TrigPoly:
        return TrigPoly(tuple(-c for c in self.cos_coeffs),
                        tuple(-c for c in self.sin_coeffs), self.pi_power)


@dataclass(frozen=True)
class UPoly:
    """Polynomial ``pi**pi_power * sum_i coeffs[i] u**i`` in ``u = cos(2 pi x)``."""

    coeffs: tuple[Fraction, ...]
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([_frac(c) for c in self.coeffs]))

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        acc = np.zeros_like(u)
        for c in reversed(self.coeffs):
            acc = acc * u + float(c)
        out = acc * math.pi**self.pi_power
        return float(out) if out.ndim == 0 else out

    def __mul__(self, other: UPoly) -> UPoly:
        if not self.coeffs or not other.coeffs:
            return UPoly((), self.pi_power + other.pi_power)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(tuple(out), self.pi_power + other.pi_power)


def build_G(case: CaseId) -> TrigPoly:
    """|1 + e(x) +- e((k+2)x)|^2 = 3 + 2cos(2 pi x) +- 2cos(2 pi (k+1)x) +- 2cos(2 pi (k+2)x)."""
    k, s = case.k, case.sign
    cos = [Fraction(0)] * (k + 3)
    cos[0] += 3
    cos[1] += 2
    cos[k + 1] += 2 * s
    cos[k + 2] += 2 * s
    return TrigPoly(tuple(cos))


def differentiate(p: TrigPoly, order: int = 1) -> TrigPoly:
    """Term-wise x-derivative; each order multiplies frequency m by 2*pi*m."""
    if order < 0:
        raise ValueError("order must be non-negative")
    for _ in range(order):
        # d/dx cos(2 pi m x) = -2 pi m sin(2 pi m x),  d/dx sin = 2 pi m cos
        new_sin = [-2 * m * p.cos_coeffs[m] for m in range(1, len(p.cos_coeffs))]
        new_cos = [Fraction(0)] + [2 * m * b for m, b in enumerate(p.sin_coeffs, start=1)]
        p = TrigPoly(tuple(new_cos), tuple(new_sin), p.pi_power + 1)
    return p


def evaluate(p: TrigPoly, x):
    """Pointwise value; ``x`` may be a scalar or a numpy array."""
    x = np.asarray(x, dtype=float)
    acc = np.zeros_like(x)
    for m, a in enumerate(p.cos_coeffs):
        if a:
            acc = acc + float(a) * (np.cos(2 * np.pi * m * x) if m else 1.0)
    for m, b in enumerate(p.sin_coeffs, start=1):
        if b:
            acc = acc + float(b) * np.sin(2 * np.pi * m * x)
    out = acc * p.scale
    return float(out) if out.ndim == 0 else out


def _chebyshev(n: int, first: tuple[int, ...]) -> list[list[int]]:
    """Integer coefficient lists of T_0..T_n (first=(0,1)) or U_0..U_n (first=(0,2))."""
    polys = [[1], list(first)]
    for _ in range(2, n + 1):
        prev, prev2 = polys[-1], polys[-2]
        nxt = [0] + [2 * c for c in prev]
        for i, c in enumerate(prev2):
            nxt[i] -= c
        polys.append(nxt)
    return polys[: n + 1]


def to_upoly(p: TrigPoly) -> UPoly:
    """Rewrite an even polynomial in u = cos(2 pi x) via T_m(u)."""
    if not p.is_even():
        raise ValueError("to_upoly needs an even polynomial (no sine part)")
    if not p.cos_coeffs:
        return UPoly((), p.pi_power)
    T = _chebyshev(len(p.cos_coeffs) - 1, (0, 1))
    out = [Fraction(0)] * len(p.cos_coeffs)
    for m, a in enumerate(p.cos_coeffs):
        for i, c in enumerate(T[m]):
            out[i] += a * c
    return UPoly(tuple(out), p.pi_power)


def sine_to_upoly(p: TrigPoly) -> UPoly:
    """For odd ``p`` return V with p(x) = sin(2 pi x) * V(cos(2 pi x)), using U_{m-1}."""
    if not p.is_odd():
        raise ValueError("sine_to_upoly needs an odd polynomial (no cosine part)")
    if not p.sin_coeffs:
        return UPoly((), p.pi_power)
    U = _chebyshev(len(p.sin_coeffs) - 1, (0, 2))
    out = [Fraction(0)] * len(p.sin_coeffs)
    for m, b in enumerate(p.sin_coeffs, start=1):
        for i, c in enumerate(U[m - 1]):
            out[i] += b * c
    return UPoly(tuple(out), p.pi_power)


def multiply(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Product via the product-to-sum identities, exact in the coefficients."""
    size = p.degree + q.degree + 1
    cos = [Fraction(0)] * size
    sin = [Fraction(0)] * size  # index m holds the coefficient of sin(2 pi m x)
    half = Fraction(1, 2)

    def pcos(m):
        return p.cos_coeffs[m] if m < len(p.cos_coeffs) else 0

    def psin(m):
        return p.sin_coeffs[m - 1] if 1 <= m <= len(p.sin_coeffs) else 0

    def qcos(m):
        return q.cos_coeffs[m] if m < len(q.cos_coeffs) else 0

    def qsin(m):
        return q.sin_coeffs[m - 1] if 1 <= m <= len(q.sin_coeffs) else 0

    for m in range(p.degree + 1):
        for n in range(q.degree + 1):
            d, s = abs(m - n), m + n
            sgn = 1 if m >= n else -1
            cc = pcos(m) * qcos(n)
            if cc:
                cos[d] += half * cc
                cos[s] += half * cc
            ss = psin(m) * qsin(n)
            if ss:
                # sin a sin b = (cos(a-b) - cos(a+b)) / 2
                cos[d] += half * ss
                cos[s] -= half * ss
            sc = psin(m) * qcos(n)
            if sc:
                # sin a cos b = (sin(a+b) + sin(a-b)) / 2
                sin[s] += half * sc
                sin[d] += half * sgn * sc
            cs = pcos(m) * qsin(n)
            if cs:
                # cos a sin b = (sin(a+b) - sin(a-b)) / 2
                sin[s] += half * cs
                sin[d] -= half * sgn * cs
    return TrigPoly(tuple(cos), tuple(sin[1:]), p.pi_power + q.pi_power)


def power(p: TrigPoly, m: int) -> TrigPoly:
    if m < 0:
        raise ValueError("power needs m >= 0")
    out = TrigPoly((Fraction(1),))
    for _ in range(m):
        out = multiply(out, p)
    return out


def mean_value(p: TrigPoly) -> Fraction | float:
    """Integral over one period; exact when no pi factor is present."""
    a0 = p.cos_coeffs[0] if p.cos_coeffs else Fraction(0)
    return a0 if p.pi_power == 0 else float(a0) * p.scale


def coeff_norm(p: TrigPoly) -> float:
    """Sum of absolute coefficients, a sup-norm bound."""
    total = sum(abs(c) for c in p.cos_coeffs) + sum(abs(c) for c in p.sin_coeffs)
    return float(total) * p.scale
